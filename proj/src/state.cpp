#include "triq/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "triq/error.hpp"

namespace triq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int bit_of(std::size_t m, int qubit) {
  return static_cast<int>((m >> (2 - qubit)) & 1U);
}

}  // namespace

PureState3Q::PureState3Q() : amp_{} { amp_[0] = 1.0; }

PureState3Q PureState3Q::normalize(const Amplitudes& amp) {
  double n2 = 0.0;
  for (const auto& a : amp) n2 += std::norm(a);
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw NormError("cannot normalize a zero or non-finite amplitude vector");
  }
  const double inv = 1.0 / std::sqrt(n2);
  Amplitudes out;
  for (std::size_t m = 0; m < kDim; ++m) out[m] = amp[m] * inv;
  return PureState3Q(out);
}

PureState3Q PureState3Q::from_amplitudes(const Amplitudes& amp, double tol) {
  double n2 = 0.0;
  for (const auto& a : amp) n2 += std::norm(a);
  if (!(std::abs(n2 - 1.0) <= tol)) {
    throw NormError("squared norm " + std::to_string(n2) + " deviates from 1");
  }
  return PureState3Q(amp);
}

PureState3Q PureState3Q::basis(int i, int j, int k) {
  Amplitudes amp{};
  amp[index(i, j, k)] = 1.0;
  return PureState3Q(amp);
}

PureState3Q PureState3Q::ghz() {
  Amplitudes amp{};
  amp[0] = amp[7] = std::numbers::sqrt2 / 2.0;
  return PureState3Q(amp);
}

PureState3Q PureState3Q::w() {
  Amplitudes amp{};
  amp[4] = amp[2] = amp[1] = 1.0 / std::sqrt(3.0);
  return PureState3Q(amp);
}

double PureState3Q::norm_squared() const {
  double n2 = 0.0;
  for (const auto& a : amp_) n2 += std::norm(a);
  return n2;
}

std::array<double, PureState3Q::kDim> PureState3Q::probabilities() const {
  std::array<double, kDim> p;
  for (std::size_t m = 0; m < kDim; ++m) p[m] = std::norm(amp_[m]);
  return p;
}

Mat2 zyz_rotation(double alpha, double beta, double gamma) {
  const double c = std::cos(beta / 2.0);
  const double s = std::sin(beta / 2.0);
  const Amplitude sum = std::polar(1.0, (alpha + gamma) / 2.0);
  const Amplitude diff = std::polar(1.0, (alpha - gamma) / 2.0);
  Mat2 u;
  u(0, 0) = c * std::conj(sum);
  u(0, 1) = -s * std::conj(diff);
  u(1, 0) = s * diff;
  u(1, 1) = c * sum;
  return u;
}

std::array<double, 3> zyz_angles(const Mat2& u) {
  // Strip the U(1) part so that det = 1.
  const Amplitude det = u.determinant();
  const Mat2 v = u * std::polar(1.0, -std::arg(det) / 2.0);

  const double abs_a = std::abs(v(0, 0));
  const double abs_b = std::abs(v(1, 0));
  const double beta = 2.0 * std::atan2(abs_b, abs_a);
  const double sum = abs_a > 1e-300 ? -2.0 * std::arg(v(0, 0)) : 0.0;
  const double diff = abs_b > 1e-300 ? 2.0 * std::arg(v(1, 0)) : 0.0;
  double alpha = (sum + diff) / 2.0;
  const double gamma = (sum - diff) / 2.0;

  // v and -v share the same angles modulo a 2*pi shift of alpha.
  const Mat2 r = zyz_rotation(alpha, beta, gamma);
  if ((r - v).squaredNorm() > (r + v).squaredNorm()) alpha += kTwoPi;
  return {alpha, beta, gamma};
}

LocalUnitary LocalUnitary::from_factors(const std::array<Mat2, 3>& factors) {
  Angles angles;
  for (std::size_t q = 0; q < 3; ++q) {
    const auto a = zyz_angles(factors[q]);
    std::copy(a.begin(), a.end(), angles.begin() + 3 * q);
  }
  return LocalUnitary(angles);
}

Mat2 LocalUnitary::factor(Party p) const {
  const auto q = static_cast<std::size_t>(p);
  return zyz_rotation(angles_[3 * q], angles_[3 * q + 1], angles_[3 * q + 2]);
}

std::array<Mat2, 3> LocalUnitary::factors() const {
  return {factor(Party::A), factor(Party::B), factor(Party::C)};
}

LocalUnitary LocalUnitary::then(const LocalUnitary& next) const {
  std::array<Mat2, 3> product;
  for (Party p : kParties) {
    product[static_cast<std::size_t>(p)] = next.factor(p) * factor(p);
  }
  return from_factors(product);
}

PureState3Q apply_on(Party party, const Mat2& u, const PureState3Q& s) {
  const int q = static_cast<int>(party);
  const std::size_t stride = std::size_t{1} << (2 - q);
  PureState3Q::Amplitudes out{};
  for (std::size_t m = 0; m < PureState3Q::kDim; ++m) {
    if (bit_of(m, q) != 0) continue;
    const Amplitude a0 = s[m];
    const Amplitude a1 = s[m + stride];
    out[m] = u(0, 0) * a0 + u(0, 1) * a1;
    out[m + stride] = u(1, 0) * a0 + u(1, 1) * a1;
  }
  return PureState3Q(out);
}

PureState3Q apply_local(const std::array<Mat2, 3>& factors, const PureState3Q& s) {
  PureState3Q out = apply_on(Party::A, factors[0], s);
  out = apply_on(Party::B, factors[1], out);
  return apply_on(Party::C, factors[2], out);
}

PureState3Q apply_local(const LocalUnitary& u, const PureState3Q& s) {
  return apply_local(u.factors(), s);
}

PureState3Q permute_qubits(const PureState3Q& s, std::array<int, 3> perm) {
  PureState3Q::Amplitudes out{};
  for (std::size_t m = 0; m < PureState3Q::kDim; ++m) {
    std::array<int, 3> bits{};
    for (int q = 0; q < 3; ++q) bits[static_cast<std::size_t>(perm[q])] = bit_of(m, q);
    out[PureState3Q::index(bits[0], bits[1], bits[2])] = s[m];
  }
  return PureState3Q(out);
}

PureState3Q sample_haar_state(Rng& rng) {
  PureState3Q::Amplitudes amp;
  for (;;) {
    double n2 = 0.0;
    for (auto& a : amp) {
      a = rng.complex_normal();
      n2 += std::norm(a);
    }
    if (n2 >= 1e-60) break;
  }
  return PureState3Q::normalize(amp);
}

Mat2 reduced_density(const PureState3Q& s, Party party) {
  const int q = static_cast<int>(party);
  Mat2 rho = Mat2::Zero();
  for (std::size_t m = 0; m < PureState3Q::kDim; ++m) {
    for (std::size_t n = 0; n < PureState3Q::kDim; ++n) {
      // Entries agree on the two traced qubits.
      const std::size_t mask = ~(std::size_t{1} << (2 - q)) & 7U;
      if ((m & mask) != (n & mask)) continue;
      rho(bit_of(m, q), bit_of(n, q)) += s[m] * std::conj(s[n]);
    }
  }
  return rho;
}

Mat4 reduced_density_pair(const PureState3Q& s, Party traced) {
  const int t = static_cast<int>(traced);
  Mat4 rho = Mat4::Zero();
  auto kept_index = [t](std::size_t m) {
    int idx = 0;
    for (int q = 0; q < 3; ++q) {
      if (q == t) continue;
      idx = 2 * idx + bit_of(m, q);
    }
    return idx;
  };
  for (std::size_t m = 0; m < PureState3Q::kDim; ++m) {
    for (std::size_t n = 0; n < PureState3Q::kDim; ++n) {
      if (bit_of(m, t) != bit_of(n, t)) continue;
      rho(kept_index(m), kept_index(n)) += s[m] * std::conj(s[n]);
    }
  }
  return rho;
}

ReducedSpectrum spectrum_of(const Mat2& rho) {
  const double a = rho(0, 0).real();
  const double d = rho(1, 1).real();
  const double off = std::norm(rho(0, 1));
  const double trace = a + d;
  const double disc = std::sqrt((a - d) * (a - d) + 4.0 * off);
  ReducedSpectrum spec;
  spec.larger = 0.5 * (trace + disc);
  // The product of the eigenvalues is the determinant; this form keeps full
  // relative precision for nearly pure reductions.
  const double det = a * d - off;
  spec.smaller = spec.larger > 0.0 ? std::max(0.0, det) / spec.larger : 0.0;
  return spec;
}

ReducedSpectrum reduced_spectrum(const PureState3Q& s, Party party) {
  return spectrum_of(reduced_density(s, party));
}

double fidelity(const PureState3Q& a, const PureState3Q& b) {
  Amplitude ip = 0.0;
  for (std::size_t m = 0; m < PureState3Q::kDim; ++m) ip += std::conj(a[m]) * b[m];
  return std::norm(ip);
}

double distance_up_to_phase(const PureState3Q& a, const PureState3Q& b) {
  Amplitude ip = 0.0;
  for (std::size_t m = 0; m < PureState3Q::kDim; ++m) ip += std::conj(b[m]) * a[m];
  const Amplitude phase = std::abs(ip) > 0.0 ? ip / std::abs(ip) : Amplitude{1.0};
  double worst = 0.0;
  for (std::size_t m = 0; m < PureState3Q::kDim; ++m) {
    worst = std::max(worst, std::abs(a[m] - phase * b[m]));
  }
  return worst;
}

}  // namespace triq
