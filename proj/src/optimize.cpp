#include "triq/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "triq/canonical.hpp"
#include "triq/error.hpp"
#include "triq/invariants.hpp"
#include "triq/nelder_mead.hpp"

namespace triq {

namespace {

constexpr std::size_t kAngles = 9;
constexpr std::uint64_t kRestartStream = 0x6f7074;

double shannon(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

double renyi_unchecked(std::span<const double> p, double q, double threshold) {
  if (q == 0.0) {
    const auto count = std::count_if(p.begin(), p.end(), [threshold](double v) { return v > threshold; });
    return std::log(static_cast<double>(std::max<std::ptrdiff_t>(count, 1)));
  }
  if (q == 1.0) return shannon(p);
  if (std::isinf(q)) return -std::log(*std::max_element(p.begin(), p.end()));
  double sum = 0.0;
  for (double v : p)
    if (v > 0.0) sum += std::pow(v, q);
  return std::log(sum) / (1.0 - q);
}

PureState3Q rotate(const PureState3Q& s, std::span<const double> x) {
  LocalUnitary::Angles a;
  std::copy(x.begin(), x.end(), a.begin());
  return apply_local(LocalUnitary(a), s);
}

LocalUnitary to_unitary(const std::vector<double>& x) {
  LocalUnitary::Angles a;
  std::copy(x.begin(), x.end(), a.begin());
  return LocalUnitary(a);
}

struct Search {
  NelderMeadResult best;
  std::vector<NelderMeadResult> locals;
  std::size_t iterations = 0;
  bool converged = false;
};

// Restart 0 starts at the identity, the rest at random angles; the best point
// is then polished by two fresh simplices of decreasing size.
Search multistart(const Objective& f, const OptimizerConfig& cfg) {
  if (cfg.restarts < 1) throw DomainError("optimizer needs at least one restart");
  Rng rng(RngSeed{cfg.seed}, kRestartStream);
  NelderMeadOptions opt{cfg.max_iters, cfg.simplex_tol, 0.5};

  Search out;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    std::vector<double> x0(kAngles, 0.0);
    if (r > 0)
      for (double& v : x0) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
    NelderMeadResult res = nelder_mead_minimize(f, x0, opt);
    out.iterations += res.iterations;
    out.converged = out.converged || res.converged;
    if (out.locals.empty() || res.value < out.best.value) out.best = res;
    out.locals.push_back(std::move(res));
  }
  for (double step : {0.1, 0.01}) {
    opt.initial_step = step;
    NelderMeadResult res = nelder_mead_minimize(f, out.best.x, opt);
    out.iterations += res.iterations;
    if (res.value < out.best.value) out.best = res;
    out.locals.push_back(std::move(res));
  }
  return out;
}

double support_weight(const PureState3Q& s, const std::vector<std::size_t>& support) {
  double w = 0.0;
  for (std::size_t m : support) w += std::norm(s[m]);
  return w;
}

// Diagonal phase gates making every (nonzero) support amplitude real and
// positive, up to a global phase. Rows are (1, i, j, k) for |ijk>.
std::array<double, 3> aligning_phases(const PureState3Q& s, const std::vector<std::size_t>& support) {
  std::vector<std::size_t> live;
  for (std::size_t m : support)
    if (std::abs(s[m]) > 1e-14) live.push_back(m);
  if (live.empty()) return {0.0, 0.0, 0.0};
  Eigen::MatrixXd lhs(static_cast<Eigen::Index>(live.size()), 4);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(live.size()));
  for (std::size_t r = 0; r < live.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    const std::size_t m = live[r];
    lhs(row, 0) = 1.0;
    lhs(row, 1) = static_cast<double>((m >> 2) & 1U);
    lhs(row, 2) = static_cast<double>((m >> 1) & 1U);
    lhs(row, 3) = static_cast<double>(m & 1U);
    rhs(row) = -std::arg(s[m]);
  }
  const Eigen::VectorXd sol = lhs.completeOrthogonalDecomposition().solve(rhs);
  return {sol(1), sol(2), sol(3)};
}

ClassStateParams params_from_magnitudes(ClassId id, const std::vector<double>& b) {
  ClassStateParams p;
  p.id = id;
  switch (angle_count(id)) {
    case 1:
      p.theta[0] = std::atan2(b[1], b[0]);
      break;
    case 2:
      p.theta[0] = std::atan2(std::hypot(b[0], b[1]), b[2]);
      p.theta[1] = std::atan2(b[0], b[1]);
      break;
    case 3:
      p.theta[0] = std::atan2(std::hypot(b[0], b[1], b[2]), b[3]);
      p.theta[1] = std::atan2(std::hypot(b[0], b[1]), b[2]);
      p.theta[2] = std::atan2(b[0], b[1]);
      break;
    default:
      break;
  }
  return p;
}

Mat2 phase_gate(double theta) {
  Mat2 g = Mat2::Identity();
  g(1, 1) = std::polar(1.0, theta);
  return g;
}

}  // namespace

double renyi_entropy(std::span<const double> p, double q, double support_threshold) {
  if (p.empty()) throw InvalidDistribution("empty probability vector");
  if (!(q >= 0.0)) throw InvalidDistribution("Renyi order must be nonnegative");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw InvalidDistribution("negative or non-finite probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-8) {
    throw InvalidDistribution("probabilities sum to " + std::to_string(sum));
  }
  return renyi_unchecked(p, q, support_threshold);
}

RiuResult riu_entropy(const PureState3Q& s, double q, const OptimizerConfig& cfg) {
  if (!(q >= 0.0)) throw InvalidDistribution("Renyi order must be nonnegative");
  // Support counting is piecewise constant, so q = 0 searches with the Shannon
  // entropy and counts supports of the local minima it finds.
  const double search_q = q == 0.0 ? 1.0 : q;
  const Objective f = [&](std::span<const double> x) {
    const auto p = rotate(s, x).probabilities();
    return renyi_unchecked(p, search_q, cfg.support_threshold);
  };
  const Search search = multistart(f, cfg);

  RiuResult out;
  out.q = q;
  out.iterations = search.iterations;
  out.converged = search.converged;
  out.argmin = to_unitary(search.best.x);
  out.prob_vector = apply_local(out.argmin, s).probabilities();
  out.entropy = renyi_unchecked(out.prob_vector, q, cfg.support_threshold);

  if (q == 0.0) {
    for (const auto& local : search.locals) {
      const LocalUnitary u = to_unitary(local.x);
      const auto p = apply_local(u, s).probabilities();
      const double h = renyi_unchecked(p, 0.0, cfg.support_threshold);
      if (h < out.entropy) {
        out.entropy = h;
        out.argmin = u;
        out.prob_vector = p;
      }
    }
    const AcinDecomposition d = acin_decompose_full(s);
    const LocalUnitary u = LocalUnitary::from_factors(d.unitary);
    const auto p = apply_local(u, s).probabilities();
    const double h = renyi_unchecked(p, 0.0, cfg.support_threshold);
    if (h < out.entropy) {
      out.entropy = h;
      out.argmin = u;
      out.prob_vector = p;
    }
  }
  out.entropy = std::max(0.0, out.entropy);
  return out;
}

OverlapResult max_overlap(const PureState3Q& s, ClassId class_id, const OptimizerConfig& cfg) {
  if (class_id == ClassId::Generic) throw DomainError("max_overlap needs an entanglement class");
  const auto& support = class_support(class_id);
  // For fixed U the best class state is the normalized projection of U|s> onto
  // the class support, so only the unitary is searched.
  const Objective f = [&](std::span<const double> x) {
    return -support_weight(rotate(s, x), support);
  };
  const Search search = multistart(f, cfg);

  OverlapResult out;
  out.class_id = class_id;
  out.iterations = search.iterations;
  out.converged = search.converged;

  LocalUnitary u = to_unitary(search.best.x);
  const PureState3Q rotated = apply_local(u, s);
  const auto phases = aligning_phases(rotated, support);
  auto factors = u.factors();
  for (std::size_t q = 0; q < 3; ++q) factors[q] = phase_gate(phases[q]) * factors[q];
  out.arg_unitary = LocalUnitary::from_factors(factors);

  const PureState3Q aligned = apply_local(out.arg_unitary, s);
  std::vector<double> magnitudes;
  PureState3Q::Amplitudes rep{};
  double weight = 0.0;
  for (std::size_t m : support) {
    magnitudes.push_back(std::abs(aligned[m]));
    rep[m] = std::abs(aligned[m]);
    weight += std::norm(aligned[m]);
  }
  out.lambda_max = std::clamp(weight, 0.0, 1.0);
  out.representative = weight > 0.0 ? PureState3Q::normalize(rep) : PureState3Q();
  out.arg_class_params = params_from_magnitudes(class_id, magnitudes);
  return out;
}

HdetTrack hdet_track(const PureState3Q& s, const OverlapResult& result) {
  return {std::abs(hyperdeterminant(s)), std::abs(hyperdeterminant(result.representative))};
}

std::vector<RiuSurfacePoint> riu_surface(ClassId class_id,
                                         const std::vector<std::array<double, 3>>& grid,
                                         const OptimizerConfig& cfg, double phi) {
  std::vector<RiuSurfacePoint> out;
  out.reserve(grid.size());
  for (const auto& theta : grid) {
    ClassStateParams p;
    p.id = class_id;
    p.theta = theta;
    p.phi = phi;
    const PureState3Q s = make_class_state(p);
    out.push_back({theta, riu_entropy(s, 1.0, cfg).entropy});
  }
  return out;
}

}  // namespace triq
