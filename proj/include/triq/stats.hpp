#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "triq/parallel.hpp"

namespace triq {

/// Fixed-support histogram. Values at the upper edge go to the last bin;
/// values outside [lo, hi] are counted separately and excluded from density.
class Histogram {
 public:
  Histogram(double lo, double hi, std::size_t bins = 200);

  void add(double x);
  void merge(const Histogram& other);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t bins() const { return counts_.size(); }
  double width() const { return (hi_ - lo_) / static_cast<double>(counts_.size()); }
  double center(std::size_t i) const { return lo_ + (static_cast<double>(i) + 0.5) * width(); }
  std::uint64_t count(std::size_t i) const { return counts_[i]; }
  std::uint64_t total() const { return total_; }
  std::uint64_t outside() const { return outside_; }
  double density(std::size_t i) const;
  /// Sum of density times bin width (one for a nonempty histogram).
  double integral() const;

  /// Exact sample mean and (population) variance of the in-support values.
  double mean() const;
  double variance() const;

 private:
  double lo_;
  double hi_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::uint64_t outside_ = 0;
  CompensatedSum sum_;
  CompensatedSum sum2_;
};

struct Support {
  double lo = 0.0;
  double hi = 1.0;
};

/// Names accepted by analytic_pdf / analytic_cdf.
const std::vector<std::string>& analytic_names();
Support analytic_support(std::string_view name);

/// Reference densities:
///   "ik"         (105/2)(1-x)^2 sqrt(2x-1)              on [1/2, 1]
///   "i5ppp"      moment-matched beta for the sextic      on [1/4, 1]
///   "i6"         (2/sqrt x) Beta(31/17, 62/17; 4 sqrt x) on [0, 1/16]
///   "j4"         4 Beta(31/17, 62/17; 4x)                on [0, 1/4]
///   "kempe"      moment-matched beta for Kempe          on [2/9, 1]
///   "lambda_min" 420 [x(2x-1)(1-x)]^2                    on [0, 1/2]
///   "phi"        1/pi                                    on [0, pi]
/// Zero outside the support. Throws UnknownDistribution for other names and
/// DomainError for non-finite x.
double analytic_pdf(std::string_view name, double x);
double analytic_cdf(std::string_view name, double x);

/// Single-qubit eigenvalue density on the simplex theta1 + theta2 = 1,
/// 210 (t1 - t2)^2 t1^2 t2^2, normalized over t2 in [0, 1].
double joint_eigen_density(double theta1, double theta2);

/// c t^a (1 - t)^b with t = (x - lo) / (hi - lo).
struct BetaLikeFit {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  /// True when c is the analytic normalization rather than a free fit.
  bool normalized = true;

  double pdf(double x) const;
};

enum class FitMethod { Moments, LeastSquares };

/// Moments: match mean and variance of a generalized beta on the histogram's
/// support (c normalizes). Least squares: minimize the L2 distance to the
/// histogram density over (a, b), with c solved in closed form.
/// Throws FitDiverged when the fit leaves the admissible region.
BetaLikeFit fit_beta_like(const Histogram& h, FitMethod method);

/// sup |F_n - F| for the empirical distribution of `samples`.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// sup |F_n - G_m| between two empirical distributions.
double ks_distance_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace triq
