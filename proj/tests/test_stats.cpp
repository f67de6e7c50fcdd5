#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "triq/error.hpp"
#include "triq/stats.hpp"

using namespace triq;

namespace {

constexpr double kPi = std::numbers::pi;

// Integral of x^k p(x) over the support; tanh-sinh copes with the endpoint
// singularities of the i6 density.
double moment(const std::string& name, int k) {
  const Support s = analytic_support(name);
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double x) { return std::pow(x, k) * analytic_pdf(name, x); }, s.lo, s.hi);
}

// Beta(p, q) samples as G1 / (G1 + G2) with independent gamma draws.
std::vector<double> beta_samples(double p, double q, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::gamma_distribution<double> g1(p, 1.0), g2(q, 1.0);
  std::vector<double> out(n);
  for (double& x : out) {
    const double a = g1(gen), b = g2(gen);
    x = a / (a + b);
  }
  return out;
}

}  // namespace

TEST_CASE("histogram bookkeeping") {
  Histogram h(0.0, 1.0, 4);
  for (double x : {0.1, 0.3, 0.3, 0.99, 1.0, 1.5, -0.1}) h.add(x);
  CHECK(h.total() == 5);
  CHECK(h.outside() == 2);
  CHECK(h.count(3) == 2);  // the top edge belongs to the last bin
  CHECK(h.center(0) == doctest::Approx(0.125));
  CHECK(h.integral() == doctest::Approx(1.0));
  CHECK(h.mean() == doctest::Approx((0.1 + 0.3 + 0.3 + 0.99 + 1.0) / 5.0));

  Histogram g(0.0, 1.0, 4);
  g.add(0.6);
  h.merge(g);
  CHECK(h.total() == 6);
  CHECK_THROWS_AS(h.merge(Histogram(0.0, 2.0, 4)), DomainError);
  CHECK_THROWS_AS(Histogram(1.0, 0.0, 4), DomainError);
}

TEST_CASE("analytic densities are normalized") {
  for (const auto& name : analytic_names()) {
    CHECK_MESSAGE(moment(name, 0) == doctest::Approx(1.0).epsilon(1e-8), name);
  }
}

TEST_CASE("analytic CDFs integrate the densities") {
  for (const auto& name : analytic_names()) {
    const Support s = analytic_support(name);
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double f : {0.2, 0.5, 0.8}) {
      const double x = s.lo + f * (s.hi - s.lo);
      const double q = ts.integrate([&](double t) { return analytic_pdf(name, t); }, s.lo, x);
      CHECK_MESSAGE(analytic_cdf(name, x) == doctest::Approx(q).epsilon(1e-8), name);
    }
    CHECK(analytic_cdf(name, s.lo - 1.0) == 0.0);
    CHECK(analytic_cdf(name, s.hi + 1.0) == 1.0);
    CHECK(analytic_pdf(name, s.hi + 1.0) == 0.0);
  }
}

TEST_CASE("analytic densities reproduce the exact Haar moments") {
  CHECK(moment("ik", 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(moment("lambda_min", 1) == doctest::Approx(29.0 / 128.0).epsilon(1e-10));
  CHECK(moment("phi", 1) == doctest::Approx(kPi / 2.0).epsilon(1e-10));
  // The beta approximations are matched to the first two moments.
  CHECK(moment("i5ppp", 1) == doctest::Approx(7.0 / 15.0).epsilon(1e-6));
  CHECK(moment("i5ppp", 2) == doctest::Approx(133.0 / 572.0).epsilon(1e-6));
  CHECK(moment("kempe", 1) == doctest::Approx(2.0 / 5.0).epsilon(1e-6));
  CHECK(moment("kempe", 2) == doctest::Approx(499.0 / 2860.0).epsilon(1e-6));
  // The tangle fit is an approximation; its mean is close to 1/110.
  CHECK(moment("i6", 1) == doctest::Approx(1.0 / 110.0).epsilon(0.02));
  CHECK(moment("j4", 1) == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("analytic lookups reject unknown names and non-finite input") {
  CHECK_THROWS_AS(analytic_pdf("nope", 0.5), UnknownDistribution);
  CHECK_THROWS_AS(analytic_support("nope"), UnknownDistribution);
  CHECK_THROWS_AS(analytic_pdf("ik", std::nan("")), DomainError);
}

TEST_CASE("joint eigenvalue density") {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double total = ts.integrate([](double t) { return joint_eigen_density(1.0 - t, t); }, 0.0, 1.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(joint_eigen_density(0.5, 0.5) == 0.0);
  CHECK_THROWS_AS(joint_eigen_density(0.5, 0.6), DomainError);
}

TEST_CASE("fits recover the parameters of synthetic beta samples") {
  // c x^a (1 - x)^b with a = 2, b = 3 is Beta(3, 4).
  const auto xs = beta_samples(3.0, 4.0, 400000, 71);
  Histogram h(0.0, 1.0, 200);
  for (double x : xs) h.add(x);
  for (FitMethod m : {FitMethod::Moments, FitMethod::LeastSquares}) {
    const BetaLikeFit f = fit_beta_like(h, m);
    CHECK(f.a == doctest::Approx(2.0).epsilon(0.05));
    CHECK(f.b == doctest::Approx(3.0).epsilon(0.05));
  }
  const BetaLikeFit f = fit_beta_like(h, FitMethod::Moments);
  CHECK(f.c == doctest::Approx(60.0).epsilon(0.05));
  CHECK(f.pdf(2.0) == 0.0);
}

TEST_CASE("fits on a shifted support") {
  const auto xs = beta_samples(5.0, 2.0, 200000, 72);
  Histogram h(0.25, 1.0, 150);
  for (double x : xs) h.add(0.25 + 0.75 * x);
  const BetaLikeFit f = fit_beta_like(h, FitMethod::Moments);
  CHECK(f.a == doctest::Approx(4.0).epsilon(0.05));
  CHECK(f.b == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("degenerate histograms do not fit") {
  Histogram h(0.0, 1.0, 10);
  CHECK_THROWS_AS(fit_beta_like(h, FitMethod::Moments), FitDiverged);
  for (int i = 0; i < 100; ++i) h.add(0.5);
  CHECK_THROWS_AS(fit_beta_like(h, FitMethod::Moments), FitDiverged);
}

TEST_CASE("KS distance") {
  const std::vector<double> constant(100, 0.5);
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_distance(constant, uniform) >= 0.5);

  std::mt19937_64 gen(73);
  std::uniform_real_distribution<double> u(0.0, kPi);
  std::vector<double> phi(100000);
  for (double& x : phi) x = u(gen);
  CHECK(ks_distance(phi, [](double x) { return analytic_cdf("phi", x); }) < 0.006);

  const auto b1 = beta_samples(2.0, 2.0, 50000, 74);
  const auto b2 = beta_samples(2.0, 2.0, 50000, 75);
  const auto b3 = beta_samples(2.5, 2.0, 50000, 76);
  CHECK(ks_distance_two_sample(b1, b2) < 0.012);
  CHECK(ks_distance_two_sample(b1, b3) > 0.05);
  CHECK_THROWS_AS(ks_distance(std::vector<double>{}, uniform), DomainError);
}
