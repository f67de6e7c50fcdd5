#include "triq/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

namespace triq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRootTiny = 1e-14;

Amplitude mixed_determinant(const Mat2& a, const Mat2& b) {
  return a(0, 0) * b(1, 1) + b(0, 0) * a(1, 1) - a(0, 1) * b(1, 0) - b(0, 1) * a(1, 0);
}

struct Eigen2 {
  double value_hi = 0.0;
  double value_lo = 0.0;
  Eigen::Vector2cd vec_hi;
  Eigen::Vector2cd vec_lo;
};

// Closed-form eigensystem of a 2x2 Hermitian matrix.
Eigen2 hermitian_eigen(const Mat2& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const Amplitude b = h(0, 1);
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  Eigen2 e;
  e.value_hi = 0.5 * (a + d) + half_gap;
  e.value_lo = 0.5 * (a + d) - half_gap;
  if (std::abs(b) == 0.0) {
    e.vec_hi = a >= d ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
  } else {
    // Two algebraically equivalent candidates; keep the better conditioned.
    Eigen::Vector2cd v1(b, e.value_hi - a);
    Eigen::Vector2cd v2(e.value_hi - d, std::conj(b));
    e.vec_hi = v1.squaredNorm() >= v2.squaredNorm() ? v1 : v2;
    e.vec_hi.normalize();
  }
  e.vec_lo = Eigen::Vector2cd(-std::conj(e.vec_hi(1)), std::conj(e.vec_hi(0)));
  return e;
}

// SU(2) matrix whose first row is v^dagger, so that it maps v to |0>.
Mat2 align_to_zero(const Eigen::Vector2cd& v) {
  Mat2 u;
  u << std::conj(v(0)), std::conj(v(1)), -v(1), v(0);
  return u;
}

Mat2 qubit_a_rotation(Amplitude p, Amplitude r) {
  const double n = std::sqrt(std::norm(p) + std::norm(r));
  Amplitude u00 = p / n;
  Amplitude u01 = r / n;
  if (std::abs(u00) > 0.0) {
    const Amplitude phase = std::conj(u00) / std::abs(u00);
    u00 *= phase;
    u01 *= phase;
  } else {
    u01 = 1.0;
  }
  Mat2 u;
  u << u00, u01, -std::conj(u01), std::conj(u00);
  return u;
}

double wrap_phase(double x) {
  x = std::fmod(x, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  if (x > kTwoPi - 1e-12) x = 0.0;
  return x;
}

Mat2 phase_gate(double theta) {
  Mat2 g = Mat2::Identity();
  g(1, 1) = std::polar(1.0, theta);
  return g;
}

// Canonical form reachable after `ua` has been applied to qubit A.
AcinDecomposition finish_candidate(const PureState3Q& s, const Mat2& ua) {
  AcinDecomposition out;
  const PureState3Q rotated = apply_on(Party::A, ua, s);
  const SliceMatrices m = slice(rotated);

  const Eigen2 right = hermitian_eigen(m.t0.adjoint() * m.t0);
  const double sigma = std::sqrt(std::max(0.0, right.value_hi));

  if (sigma < kZeroCoefficient) {
    // T0' vanishes: the state is |1> (x) (two-qubit state). Diagonalize T1'.
    const Eigen2 r1 = hermitian_eigen(m.t1.adjoint() * m.t1);
    const double s1 = std::sqrt(std::max(0.0, r1.value_hi));
    const double s2 = std::sqrt(std::max(0.0, r1.value_lo));
    Eigen::Vector2cd left = s1 > 0.0 ? Eigen::Vector2cd(m.t1 * r1.vec_hi / s1)
                                     : Eigen::Vector2cd(1.0, 0.0);
    left.normalize();
    const Mat2 vb = align_to_zero(left);
    const Mat2 wc = align_to_zero(r1.vec_hi.conjugate());
    const PureState3Q t = apply_local({ua, vb, wc}, s);
    // The (1,1) entry of V T1 W^T carries a residual phase; absorb it on C.
    const Amplitude c111 = t.at(1, 1, 1);
    const double theta = std::abs(c111) > kZeroCoefficient ? -std::arg(c111) : 0.0;
    const Amplitude c100 = t.at(1, 0, 0);
    // Global phase so that the |100> coefficient is real and positive.
    const double global = std::abs(c100) > 0.0 ? -std::arg(c100) : 0.0;
    Mat2 a_gate = ua * std::polar(1.0, global);
    out.unitary = {a_gate, vb, phase_gate(theta) * wc};
    out.form.lambda = {0.0, s1, 0.0, 0.0, s2};
    out.form.phi = 0.0;
    out.form.degenerate = true;
    return out;
  }

  const Eigen::Vector2cd left = m.t0 * right.vec_hi / sigma;
  const Mat2 vb = align_to_zero(left.normalized());
  const Mat2 wc = align_to_zero(right.vec_hi.conjugate());
  const PureState3Q t = apply_local({ua, vb, wc}, s);

  // Phases of the surviving coefficients, ordered 100, 101, 110, 111. A phase
  // gate diag(1, e^{i a}) x diag(1, e^{i b}) x diag(1, e^{i c}) shifts them by
  // a, a + c, a + b, a + b + c respectively.
  const std::array<Amplitude, 4> coef{t.at(1, 0, 0), t.at(1, 0, 1), t.at(1, 1, 0), t.at(1, 1, 1)};
  const std::array<Eigen::RowVector3d, 4> rows{
      Eigen::RowVector3d(1, 0, 0), Eigen::RowVector3d(1, 0, 1),
      Eigen::RowVector3d(1, 1, 0), Eigen::RowVector3d(1, 1, 1)};
  std::array<bool, 4> nonzero{};
  bool all_nonzero = true;
  for (std::size_t i = 0; i < 4; ++i) {
    nonzero[i] = std::abs(coef[i]) > kZeroCoefficient;
    all_nonzero = all_nonzero && nonzero[i];
  }

  // Constraints: when every coefficient survives, make 101/110/111 real and
  // leave the invariant phase on 100; otherwise some phase is free and all
  // nonzero coefficients are made real. Any three rows are independent.
  std::vector<std::size_t> chosen;
  if (all_nonzero) {
    chosen = {1, 2, 3};
  } else {
    for (std::size_t i = 0; i < 4; ++i)
      if (nonzero[i]) chosen.push_back(i);
    for (std::size_t i = 0; i < 4 && chosen.size() < 3; ++i)
      if (!nonzero[i]) chosen.push_back(i);
    chosen.resize(3);
  }
  Eigen::Matrix3d lhs;
  Eigen::Vector3d rhs;
  for (std::size_t r = 0; r < 3; ++r) {
    const std::size_t i = chosen[r];
    lhs.row(static_cast<Eigen::Index>(r)) = rows[i];
    rhs(static_cast<Eigen::Index>(r)) = nonzero[i] ? -std::arg(coef[i]) : 0.0;
  }
  const Eigen::Vector3d abc = lhs.partialPivLu().solve(rhs);

  double phi = 0.0;
  if (all_nonzero) phi = wrap_phase(std::arg(coef[0]) + abc(0));

  std::array<double, 5> lambda{std::abs(t.at(0, 0, 0)), std::abs(coef[0]), std::abs(coef[1]),
                               std::abs(coef[2]), std::abs(coef[3])};
  double n2 = 0.0;
  for (double l : lambda) n2 += l * l;
  for (double& l : lambda) l /= std::sqrt(n2);

  out.form.lambda = lambda;
  out.form.phi = phi;
  out.unitary = {phase_gate(abc(0)) * ua, phase_gate(abc(1)) * vb, phase_gate(abc(2)) * wc};
  return out;
}

bool phase_admissible(double phi) { return phi <= kPi + 1e-12; }

// Strict preference of a over b: admissible phase, nondegenerate, larger l0,
// larger l4, smaller phi.
bool preferred(const AcinForm& a, const AcinForm& b) {
  const bool pa = phase_admissible(a.phi);
  const bool pb = phase_admissible(b.phi);
  if (pa != pb) return pa;
  if (a.degenerate != b.degenerate) return !a.degenerate;
  if (a.lambda[0] != b.lambda[0]) return a.lambda[0] > b.lambda[0];
  if (a.lambda[4] != b.lambda[4]) return a.lambda[4] > b.lambda[4];
  return a.phi < b.phi;
}

}  // namespace

SliceMatrices slice(const PureState3Q& s) {
  SliceMatrices m;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      m.t0(j, k) = s.at(0, j, k);
      m.t1(j, k) = s.at(1, j, k);
    }
  }
  return m;
}

std::vector<Mat2> nullifying_rotation(const SliceMatrices& m) {
  // det(p T0 + r T1) = p^2 det T0 + p r m1 + r^2 det T1, solved in
  // homogeneous coordinates (p, r) so that a root at infinity is just p = 0.
  const Amplitude a = m.t1.determinant();
  const Amplitude b = mixed_determinant(m.t0, m.t1);
  const Amplitude c = m.t0.determinant();

  std::vector<Mat2> out;
  const bool a_zero = std::abs(a) <= kRootTiny;
  const bool b_zero = std::abs(b) <= kRootTiny;
  const bool c_zero = std::abs(c) <= kRootTiny;
  if (a_zero && b_zero && c_zero) {
    out.push_back(Mat2::Identity());
    out.push_back(qubit_a_rotation(0.0, 1.0));
    return out;
  }

  const Amplitude sq = std::sqrt(b * b - 4.0 * a * c);
  const Amplitude q = std::norm(b + sq) >= std::norm(b - sq) ? -0.5 * (b + sq) : -0.5 * (b - sq);
  if (std::abs(q) > kRootTiny) {
    // Roots x = q / a and x = c / q.
    out.push_back(qubit_a_rotation(a, q));
    out.push_back(qubit_a_rotation(q, c));
  } else if (c_zero) {
    out.push_back(Mat2::Identity());
  } else {
    out.push_back(qubit_a_rotation(0.0, 1.0));
  }
  return out;
}

AcinDecomposition acin_decompose_full(const PureState3Q& s) {
  const std::vector<Mat2> candidates = nullifying_rotation(slice(s));
  std::optional<AcinDecomposition> best;
  for (const Mat2& ua : candidates) {
    AcinDecomposition d = finish_candidate(s, ua);
    if (!best || preferred(d.form, best->form)) best = d;
  }
  if (!phase_admissible(best->form.phi)) {
    best->form.phi = kTwoPi - best->form.phi;
    best->form.reflected = true;
  }
  return *best;
}

PureState3Q reconstruct(const AcinForm& f) {
  PureState3Q::Amplitudes amp{};
  amp[PureState3Q::index(0, 0, 0)] = f.lambda[0];
  amp[PureState3Q::index(1, 0, 0)] = std::polar(f.lambda[1], f.phi);
  amp[PureState3Q::index(1, 0, 1)] = f.lambda[2];
  amp[PureState3Q::index(1, 1, 0)] = f.lambda[3];
  amp[PureState3Q::index(1, 1, 1)] = f.lambda[4];
  return PureState3Q::normalize(amp);
}

}  // namespace triq
