#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "triq/invariants.hpp"
#include "triq/state.hpp"

namespace triq {

enum class ClassId { C1, C2a, C2b, C3a, C3b, C4a, C4b, C4c, C4d, Generic };

inline constexpr std::array<ClassId, 9> kEntanglementClasses{
    ClassId::C1,  ClassId::C2a, ClassId::C2b, ClassId::C3a, ClassId::C3b,
    ClassId::C4a, ClassId::C4b, ClassId::C4c, ClassId::C4d};

inline constexpr double kClassTolerance = 1e-9;

/// "1", "2a", ..., "4d", "generic".
std::string_view class_name(ClassId id);
std::optional<ClassId> parse_class_name(std::string_view name);

/// Number of free angles of the class generator (alpha for 2x, theta1/theta2
/// for 3x, theta0..theta2 for 4x).
int angle_count(ClassId id);

/// Classes whose generator carries a relative phase on |100>.
bool has_phase(ClassId id);

/// Basis states (as amplitude indices) spanned by the class generator.
const std::vector<std::size_t>& class_support(ClassId id);

struct ClassStateParams {
  ClassId id = ClassId::C1;
  /// Angles in (0, pi/2); only the first angle_count(id) are read.
  std::array<double, 3> theta{};
  double phi = 0.0;
};

/// First class (in declaration order) whose Table-2 conditions hold within
/// `tol`, or Generic.
ClassId classify(const InvariantSetJ& j, double tol = kClassTolerance);

/// True when a state generated for class `general` may legitimately classify
/// as `specific` (equal, or a degenerate member of a more special class).
bool refines(ClassId specific, ClassId general);

/// The literal parametrized state of the class. Throws InvalidAngle for
/// angles outside (0, pi/2).
PureState3Q make_class_state(const ClassStateParams& p);

/// Local unitary on qubit A taking the decomposer's output basis to the
/// listed basis of the class (X for 2a, identity otherwise).
Mat2 class_relabeling(ClassId id);

/// Bit flip on every qubit followed by exchanging qubits A and C.
PureState3Q flip_and_swap_outer(const PureState3Q& s);

enum class SloccLabel { GhzClass, WClass, Biseparable, Separable };

std::string_view slocc_name(SloccLabel label);

SloccLabel slocc_label(const PureState3Q& s, double tol = kClassTolerance);

}  // namespace triq
