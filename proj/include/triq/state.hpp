#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "triq/rng.hpp"

namespace triq {

using Amplitude = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

enum class Party { A = 0, B = 1, C = 2 };

inline constexpr std::array<Party, 3> kParties{Party::A, Party::B, Party::C};

/// Three-qubit pure state. Amplitudes are stored big-endian: amp[4i + 2j + k]
/// is the coefficient of |ijk>, qubit A being the most significant bit.
class PureState3Q {
 public:
  static constexpr std::size_t kDim = 8;
  using Amplitudes = std::array<Amplitude, kDim>;

  /// |000>.
  PureState3Q();

  /// Rescales `amp` to unit norm. Throws NormError for the zero vector.
  static PureState3Q normalize(const Amplitudes& amp);

  /// Accepts `amp` as-is if its squared norm is within `tol` of one,
  /// otherwise throws NormError.
  static PureState3Q from_amplitudes(const Amplitudes& amp, double tol = 1e-12);

  static PureState3Q basis(int i, int j, int k);
  static PureState3Q ghz();
  static PureState3Q w();

  static constexpr std::size_t index(int i, int j, int k) {
    return static_cast<std::size_t>(4 * i + 2 * j + k);
  }

  const Amplitude& operator[](std::size_t m) const { return amp_[m]; }
  const Amplitude& at(int i, int j, int k) const { return amp_[index(i, j, k)]; }
  const Amplitudes& amplitudes() const { return amp_; }

  double norm_squared() const;
  std::array<double, kDim> probabilities() const;

 private:
  explicit PureState3Q(const Amplitudes& amp) : amp_(amp) {}
  friend PureState3Q apply_on(Party, const Mat2&, const PureState3Q&);
  friend PureState3Q permute_qubits(const PureState3Q&, std::array<int, 3>);

  Amplitudes amp_;
};

/// Z-Y-Z Euler rotation Rz(alpha) Ry(beta) Rz(gamma), an SU(2) element.
Mat2 zyz_rotation(double alpha, double beta, double gamma);

/// Element of U(2) x U(2) x U(2) with global phases dropped, stored as three
/// Z-Y-Z angle triples (qubit A first).
class LocalUnitary {
 public:
  using Angles = std::array<double, 9>;

  LocalUnitary() : angles_{} {}
  explicit LocalUnitary(const Angles& angles) : angles_(angles) {}

  /// Projects each factor onto SU(2) (dropping its phase) and extracts
  /// Z-Y-Z angles. Factors must be unitary.
  static LocalUnitary from_factors(const std::array<Mat2, 3>& factors);

  const Angles& angles() const { return angles_; }
  Mat2 factor(Party p) const;
  std::array<Mat2, 3> factors() const;

  /// The transformation `next` ∘ `*this` (this one acts first).
  LocalUnitary then(const LocalUnitary& next) const;

 private:
  Angles angles_;
};

/// Z-Y-Z angles of an SU(2)-projected 2x2 unitary.
std::array<double, 3> zyz_angles(const Mat2& u);

PureState3Q apply_on(Party party, const Mat2& u, const PureState3Q& s);
PureState3Q apply_local(const std::array<Mat2, 3>& factors, const PureState3Q& s);
PureState3Q apply_local(const LocalUnitary& u, const PureState3Q& s);

/// Reorders the qubits: qubit q of the input becomes qubit perm[q] of the
/// output.
PureState3Q permute_qubits(const PureState3Q& s, std::array<int, 3> perm);

/// Draws a state distributed as a column of a Haar-random U(8).
PureState3Q sample_haar_state(Rng& rng);

Mat2 reduced_density(const PureState3Q& s, Party party);

/// Two-qubit reduction obtained by tracing out `traced`; the remaining qubits
/// keep their relative order (so tracing C yields rho_AB indexed 2a + b).
Mat4 reduced_density_pair(const PureState3Q& s, Party traced);

struct ReducedSpectrum {
  double larger = 1.0;
  double smaller = 0.0;
};

ReducedSpectrum reduced_spectrum(const PureState3Q& s, Party party);
ReducedSpectrum spectrum_of(const Mat2& rho);

/// |<a|b>|^2.
double fidelity(const PureState3Q& a, const PureState3Q& b);

/// max_m |a_m - e^{i theta} b_m| with the phase chosen to align the largest
/// component, for comparing states up to a global phase.
double distance_up_to_phase(const PureState3Q& a, const PureState3Q& b);

}  // namespace triq
