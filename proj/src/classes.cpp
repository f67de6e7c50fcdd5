#include "triq/classes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "triq/error.hpp"

namespace triq {

namespace {

constexpr std::array<std::string_view, 10> kNames{"1",  "2a", "2b", "3a", "3b",
                                                  "4a", "4b", "4c", "4d", "generic"};

bool zero(double v, double tol) { return std::abs(v) <= tol; }

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

void check_angle(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2.0)) {
    throw InvalidAngle("class angle " + std::to_string(theta) + " outside (0, pi/2)");
  }
}

}  // namespace

std::string_view class_name(ClassId id) { return kNames[static_cast<std::size_t>(id)]; }

std::optional<ClassId> parse_class_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<ClassId>(i);
  }
  return std::nullopt;
}

int angle_count(ClassId id) {
  switch (id) {
    case ClassId::C1:
    case ClassId::Generic:
      return 0;
    case ClassId::C2a:
    case ClassId::C2b:
      return 1;
    case ClassId::C3a:
    case ClassId::C3b:
      return 2;
    default:
      return 3;
  }
}

bool has_phase(ClassId id) { return id == ClassId::C4a || id == ClassId::C4b; }

const std::vector<std::size_t>& class_support(ClassId id) {
  using S = PureState3Q;
  static const std::array<std::vector<std::size_t>, 10> supports{{
      {S::index(0, 0, 0)},
      {S::index(0, 0, 0), S::index(0, 1, 1)},
      {S::index(0, 0, 0), S::index(1, 1, 1)},
      {S::index(0, 0, 0), S::index(1, 0, 1), S::index(1, 1, 0)},
      {S::index(0, 0, 0), S::index(1, 1, 0), S::index(1, 1, 1)},
      {S::index(0, 0, 0), S::index(1, 0, 0), S::index(1, 0, 1), S::index(1, 1, 0)},
      {S::index(0, 0, 0), S::index(1, 0, 0), S::index(1, 1, 0), S::index(1, 1, 1)},
      {S::index(0, 0, 0), S::index(1, 0, 1), S::index(1, 1, 0), S::index(1, 1, 1)},
      {S::index(0, 0, 0), S::index(0, 1, 0), S::index(1, 0, 0), S::index(1, 1, 1)},
      {0, 1, 2, 3, 4, 5, 6, 7},
  }};
  return supports[static_cast<std::size_t>(id)];
}

ClassId classify(const InvariantSetJ& j, double tol) {
  const double root123 = std::sqrt(std::max(0.0, j.j1 * j.j2 * j.j3));
  const double pair_sum = j.j1 * j.j2 + j.j1 * j.j3 + j.j2 * j.j3;

  if (zero(j.j1, tol) && zero(j.j2, tol) && zero(j.j3, tol) && zero(j.j4, tol) && zero(j.j5, tol))
    return ClassId::C1;
  if (zero(j.j2, tol) && zero(j.j3, tol) && zero(j.j4, tol) && zero(j.j5, tol))
    return ClassId::C2a;
  if (zero(j.j1, tol) && zero(j.j2, tol) && zero(j.j3, tol) && zero(j.j5, tol))
    return ClassId::C2b;
  if (zero(j.j4, tol) && near(pair_sum, root123, tol) && near(root123, j.j5 / 2.0, tol))
    return ClassId::C3a;
  if (zero(j.j1, tol) && zero(j.j2, tol) && zero(j.j5, tol)) return ClassId::C3b;
  if (zero(j.j4, tol) && near(root123, j.j5 / 2.0, tol)) return ClassId::C4a;
  if (zero(j.j2, tol) && zero(j.j5, tol)) return ClassId::C4b;
  if (near(j.j1 * j.j4 + pair_sum, root123, tol) && near(root123, j.j5 / 2.0, tol))
    return ClassId::C4c;
  if (zero(j.delta_j(), tol) && near(root123, std::abs(j.j5) / 2.0, tol)) return ClassId::C4d;
  return ClassId::Generic;
}

bool refines(ClassId specific, ClassId general) {
  if (specific == general || specific == ClassId::C1) return true;
  using C = ClassId;
  switch (specific) {
    case C::C2a:
      return general == C::C3a || general == C::C4a || general == C::C4b || general == C::C4c ||
             general == C::C4d;
    case C::C2b:
      return general == C::C3b || general == C::C4b || general == C::C4c || general == C::C4d;
    case C::C3a:
      return general == C::C4a || general == C::C4c;
    case C::C3b:
      return general == C::C4b || general == C::C4c;
    default:
      return false;
  }
}

PureState3Q make_class_state(const ClassStateParams& p) {
  const int n = angle_count(p.id);
  if (p.id == ClassId::Generic) throw DomainError("no generator for the generic class");
  for (int k = 0; k < n; ++k) check_angle(p.theta[static_cast<std::size_t>(k)]);

  std::vector<Amplitude> coef;
  const auto& t = p.theta;
  switch (n) {
    case 0:
      coef = {1.0};
      break;
    case 1:
      coef = {std::cos(t[0]), std::sin(t[0])};
      break;
    case 2:
      coef = {std::sin(t[0]) * std::sin(t[1]), std::sin(t[0]) * std::cos(t[1]), std::cos(t[0])};
      break;
    default:
      coef = {std::sin(t[0]) * std::sin(t[1]) * std::sin(t[2]),
              std::sin(t[0]) * std::sin(t[1]) * std::cos(t[2]), std::sin(t[0]) * std::cos(t[1]),
              std::cos(t[0])};
      if (has_phase(p.id)) coef[1] *= std::polar(1.0, p.phi);
      break;
  }

  const auto& support = class_support(p.id);
  PureState3Q::Amplitudes amp{};
  for (std::size_t k = 0; k < support.size(); ++k) amp[support[k]] = coef[k];
  return PureState3Q::normalize(amp);
}

Mat2 class_relabeling(ClassId id) {
  if (id == ClassId::C2a) {
    Mat2 x;
    x << 0.0, 1.0, 1.0, 0.0;
    return x;
  }
  return Mat2::Identity();
}

PureState3Q flip_and_swap_outer(const PureState3Q& s) {
  Mat2 x;
  x << 0.0, 1.0, 1.0, 0.0;
  return permute_qubits(apply_local({x, x, x}, s), {2, 1, 0});
}

std::string_view slocc_name(SloccLabel label) {
  switch (label) {
    case SloccLabel::GhzClass:
      return "GHZ";
    case SloccLabel::WClass:
      return "W";
    case SloccLabel::Biseparable:
      return "biseparable";
    default:
      return "separable";
  }
}

SloccLabel slocc_label(const PureState3Q& s, double tol) {
  if (std::norm(hyperdeterminant(s)) > tol) return SloccLabel::GhzClass;
  const auto purities = purity_invariants(s);
  int mixed = 0;
  for (double p : purities) mixed += (1.0 - p > tol) ? 1 : 0;
  if (mixed == 3) return SloccLabel::WClass;
  if (mixed == 0) return SloccLabel::Separable;
  return SloccLabel::Biseparable;
}

}  // namespace triq
