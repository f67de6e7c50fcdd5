#include "triq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "triq/error.hpp"
#include "triq/nelder_mead.hpp"

namespace triq {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kF5A = 21989.0 / 5691.0;
constexpr double kF5B = 5554.0 / 5691.0;
constexpr double kTangleP = 31.0 / 17.0;
constexpr double kTangleQ = 62.0 / 17.0;
constexpr double kKempeA = 90.0 / 23.0;
constexpr double kKempeB = 283.0 / 621.0;

// Beta(p, q) density at y in [0, 1].
double beta_pdf(double p, double q, double y) {
  if (y <= 0.0 || y >= 1.0) {
    if (y == 0.0 && p == 1.0) return 1.0 / boost::math::beta(p, q);
    if (y == 1.0 && q == 1.0) return 1.0 / boost::math::beta(p, q);
    return 0.0;
  }
  return std::exp((p - 1.0) * std::log(y) + (q - 1.0) * std::log1p(-y) -
                  std::log(boost::math::beta(p, q)));
}

double ibeta(double p, double q, double y) {
  return boost::math::ibeta(p, q, std::clamp(y, 0.0, 1.0));
}

const std::vector<std::string> kNames{"ik", "i5ppp", "i6", "j4", "kempe", "lambda_min", "phi"};

}  // namespace

Histogram::Histogram(double lo, double hi, std::size_t bins) : lo_(lo), hi_(hi), counts_(bins, 0) {
  if (!(hi > lo) || bins == 0) throw DomainError("histogram needs hi > lo and at least one bin");
}

void Histogram::add(double x) {
  if (!(x >= lo_ && x <= hi_)) {
    ++outside_;
    return;
  }
  const auto n = counts_.size();
  const auto i = std::min(static_cast<std::size_t>((x - lo_) / (hi_ - lo_) * static_cast<double>(n)), n - 1);
  ++counts_[i];
  ++total_;
  sum_.add(x);
  sum2_.add(x * x);
}

void Histogram::merge(const Histogram& other) {
  if (other.counts_.size() != counts_.size() || other.lo_ != lo_ || other.hi_ != hi_) {
    throw DomainError("cannot merge histograms with different binning");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
  outside_ += other.outside_;
  sum_.merge(other.sum_);
  sum2_.merge(other.sum2_);
}

double Histogram::density(std::size_t i) const {
  if (total_ == 0) return 0.0;
  return static_cast<double>(counts_[i]) / (static_cast<double>(total_) * width());
}

double Histogram::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < counts_.size(); ++i) s += density(i) * width();
  return s;
}

double Histogram::mean() const {
  return total_ == 0 ? 0.0 : sum_.value() / static_cast<double>(total_);
}

double Histogram::variance() const {
  if (total_ == 0) return 0.0;
  const double m = mean();
  return std::max(0.0, sum2_.value() / static_cast<double>(total_) - m * m);
}

const std::vector<std::string>& analytic_names() { return kNames; }

Support analytic_support(std::string_view name) {
  if (name == "ik") return {0.5, 1.0};
  if (name == "i5ppp") return {0.25, 1.0};
  if (name == "i6") return {0.0, 1.0 / 16.0};
  if (name == "j4") return {0.0, 0.25};
  if (name == "kempe") return {2.0 / 9.0, 1.0};
  if (name == "lambda_min") return {0.0, 0.5};
  if (name == "phi") return {0.0, kPi};
  throw UnknownDistribution("unknown distribution '" + std::string(name) + "'");
}

double analytic_pdf(std::string_view name, double x) {
  const Support s = analytic_support(name);
  if (!std::isfinite(x)) throw DomainError("non-finite argument");
  if (x < s.lo || x > s.hi) return 0.0;

  if (name == "ik") {
    const double u = 1.0 - x;
    return 52.5 * u * u * std::sqrt(std::max(0.0, 2.0 * x - 1.0));
  }
  if (name == "i5ppp") {
    // Beta(b+1, a+1) in y = (4x - 1) / 3, scaled by dy/dx = 4/3.
    return 4.0 / 3.0 * beta_pdf(kF5B + 1.0, kF5A + 1.0, (4.0 * x - 1.0) / 3.0);
  }
  if (name == "i6") {
    if (x == 0.0) return 0.0;
    return 2.0 / std::sqrt(x) * beta_pdf(kTangleP, kTangleQ, 4.0 * std::sqrt(x));
  }
  if (name == "j4") return 4.0 * beta_pdf(kTangleP, kTangleQ, 4.0 * x);
  if (name == "kempe") {
    return 9.0 / 7.0 * beta_pdf(kKempeB + 1.0, kKempeA + 1.0, (9.0 * x - 2.0) / 7.0);
  }
  if (name == "lambda_min") {
    const double v = x * (2.0 * x - 1.0) * (1.0 - x);
    return 420.0 * v * v;
  }
  return 1.0 / kPi;
}

double analytic_cdf(std::string_view name, double x) {
  const Support s = analytic_support(name);
  if (!std::isfinite(x)) throw DomainError("non-finite argument");
  if (x <= s.lo) return 0.0;
  if (x >= s.hi) return 1.0;

  if (name == "ik") return ibeta(1.5, 3.0, 2.0 * x - 1.0);
  if (name == "i5ppp") return ibeta(kF5B + 1.0, kF5A + 1.0, (4.0 * x - 1.0) / 3.0);
  if (name == "i6") return ibeta(kTangleP, kTangleQ, 4.0 * std::sqrt(x));
  if (name == "j4") return ibeta(kTangleP, kTangleQ, 4.0 * x);
  if (name == "kempe") return ibeta(kKempeB + 1.0, kKempeA + 1.0, (9.0 * x - 2.0) / 7.0);
  if (name == "lambda_min") {
    return x * x * x * (140.0 + x * (-630.0 + x * (1092.0 + x * (-840.0 + x * 240.0))));
  }
  return x / kPi;
}

double joint_eigen_density(double theta1, double theta2) {
  if (!(theta1 >= 0.0 && theta1 <= 1.0 && theta2 >= 0.0 && theta2 <= 1.0) ||
      std::abs(theta1 + theta2 - 1.0) > 1e-9) {
    throw DomainError("eigenvalues must lie on the simplex theta1 + theta2 = 1");
  }
  const double d = theta1 - theta2;
  return 210.0 * d * d * theta1 * theta1 * theta2 * theta2;
}

double BetaLikeFit::pdf(double x) const {
  if (x < lo || x > hi) return 0.0;
  const double t = (x - lo) / (hi - lo);
  if (t <= 0.0) return a == 0.0 ? c : 0.0;
  if (t >= 1.0) return b == 0.0 ? c : 0.0;
  return c * std::exp(a * std::log(t) + b * std::log1p(-t));
}

BetaLikeFit fit_beta_like(const Histogram& h, FitMethod method) {
  if (h.total() < 2) throw FitDiverged("histogram is empty");
  const double span = h.hi() - h.lo();
  const double m = (h.mean() - h.lo()) / span;
  const double v = h.variance() / (span * span);
  if (!(v > 0.0) || !(m > 0.0 && m < 1.0)) {
    throw FitDiverged("degenerate sample moments: mean " + std::to_string(m) + ", variance " +
                      std::to_string(v));
  }

  // Beta(a+1, b+1) on t: mean (a+1)/(a+b+2), variance mean(1-mean)/(a+b+3).
  const double total = m * (1.0 - m) / v - 1.0;
  BetaLikeFit fit;
  fit.lo = h.lo();
  fit.hi = h.hi();
  fit.a = m * total - 1.0;
  fit.b = (1.0 - m) * total - 1.0;
  if (!(fit.a > -1.0 && fit.b > -1.0)) {
    throw FitDiverged("moment match outside the admissible region (mean " + std::to_string(m) +
                      ", variance " + std::to_string(v) + ")");
  }
  fit.c = 1.0 / (span * boost::math::beta(fit.a + 1.0, fit.b + 1.0));
  fit.normalized = true;
  if (method == FitMethod::Moments) return fit;

  std::vector<double> t(h.bins()), y(h.bins());
  for (std::size_t i = 0; i < h.bins(); ++i) {
    t[i] = (h.center(i) - h.lo()) / span;
    y[i] = h.density(i);
  }
  // For fixed (a, b) the optimal scale is <y, g> / <g, g>.
  auto shape_and_scale = [&](double a, double b, double& c) {
    double gy = 0.0, gg = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double g = std::exp(a * std::log(t[i]) + b * std::log1p(-t[i]));
      gy += g * y[i];
      gg += g * g;
    }
    c = gg > 0.0 ? gy / gg : 0.0;
    double r = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double g = std::exp(a * std::log(t[i]) + b * std::log1p(-t[i]));
      r += (c * g - y[i]) * (c * g - y[i]);
    }
    return r;
  };
  const Objective f = [&](std::span<const double> x) {
    if (!(x[0] > -1.0 && x[1] > -1.0)) return 1e300;
    double c = 0.0;
    return shape_and_scale(x[0], x[1], c);
  };
  NelderMeadOptions opt;
  opt.max_iters = 5000;
  opt.size_tol = 1e-9;
  opt.initial_step = 0.25 * std::max(1.0, std::min(fit.a, fit.b) + 1.0);
  const NelderMeadResult res = nelder_mead_minimize(f, {fit.a, fit.b}, opt);
  if (!std::isfinite(res.value) || res.value >= 1e300) {
    throw FitDiverged("least-squares fit diverged");
  }
  BetaLikeFit ls;
  ls.lo = h.lo();
  ls.hi = h.hi();
  ls.a = res.x[0];
  ls.b = res.x[1];
  shape_and_scale(ls.a, ls.b, ls.c);
  ls.normalized = false;
  return ls;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_distance needs samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

double ks_distance_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_distance_two_sample needs samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

}  // namespace triq
