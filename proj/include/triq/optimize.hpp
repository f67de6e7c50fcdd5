#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "triq/classes.hpp"
#include "triq/state.hpp"

namespace triq {

inline constexpr double kRenyiInfinity = std::numeric_limits<double>::infinity();

/// Renyi entropy in nats. q = 0 counts entries above `support_threshold`,
/// q = 1 is the Shannon entropy, q = infinity is -ln max p.
double renyi_entropy(std::span<const double> p, double q, double support_threshold = 1e-8);

struct OptimizerConfig {
  std::size_t restarts = 20;
  std::size_t max_iters = 2000;
  double simplex_tol = 1e-10;
  std::uint64_t seed = 0;
  double support_threshold = 1e-8;
};

struct RiuResult {
  double q = 1.0;
  double entropy = 0.0;
  LocalUnitary argmin;
  std::array<double, PureState3Q::kDim> prob_vector{};
  std::size_t iterations = 0;
  /// False when no restart met the simplex tolerance within its budget.
  bool converged = false;
};

/// Minimum over local unitaries of the Renyi entropy of the computational
/// basis probabilities.
RiuResult riu_entropy(const PureState3Q& s, double q, const OptimizerConfig& cfg = {});

struct OverlapResult {
  ClassId class_id = ClassId::C1;
  double lambda_max = 0.0;
  ClassStateParams arg_class_params;
  LocalUnitary arg_unitary;
  /// Closest class state found, in the class's listed basis.
  PureState3Q representative;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Largest |<phi| U |s>|^2 over class states phi and local unitaries U.
OverlapResult max_overlap(const PureState3Q& s, ClassId class_id, const OptimizerConfig& cfg = {});

struct HdetTrack {
  double hdet_beta = 0.0;
  double hdet_phi = 0.0;
};

/// |Hdet| of the input and of the optimal class representative.
HdetTrack hdet_track(const PureState3Q& s, const OverlapResult& result);

struct RiuSurfacePoint {
  std::array<double, 3> theta{};
  double entropy = 0.0;
};

/// S_1^RIU of the class generator at each grid point. Angles beyond
/// angle_count(class_id) are ignored.
std::vector<RiuSurfacePoint> riu_surface(ClassId class_id,
                                         const std::vector<std::array<double, 3>>& grid,
                                         const OptimizerConfig& cfg = {}, double phi = 0.0);

}  // namespace triq
