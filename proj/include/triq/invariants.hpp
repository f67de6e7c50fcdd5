#pragma once

#include <array>
#include <cstdint>

#include "triq/canonical.hpp"
#include "triq/state.hpp"

namespace triq {

struct InvariantSetI {
  double i2 = 1.0;
  double i3 = 1.0;
  double i4 = 1.0;
  double i5ppp = 1.0;
  double i6 = 0.0;
  double kempe = 1.0;
};

struct InvariantSetJ {
  double j1 = 0.0;
  double j2 = 0.0;
  double j3 = 0.0;
  double j4 = 0.0;
  double j5 = 0.0;

  /// (J4 + J5)^2 - 4 (J1 + J4)(J2 + J4)(J3 + J4).
  double delta_j() const;
};

/// Single-qubit purities tr(rho_A^2), tr(rho_B^2), tr(rho_C^2).
std::array<double, 3> purity_invariants(const PureState3Q& s);

/// tr[(rho_A (x) rho_B) rho_AB].
double sextic_invariant(const PureState3Q& s);

/// Cayley hyperdeterminant of the 2x2x2 amplitude tensor. |Hdet|^2 = I6 and
/// the three-tangle is 4 |Hdet|.
Amplitude hyperdeterminant(const PureState3Q& s);

/// 3 tr[(rho_A (x) rho_B) rho_AB] - tr rho_A^3 - tr rho_B^3.
double kempe_invariant(const PureState3Q& s);

/// The Kempe invariant expanded in canonical-form parameters.
double kempe_from_acin(const AcinForm& f);

InvariantSetI invariants_i(const PureState3Q& s);

InvariantSetJ j_from_acin(const AcinForm& f);

/// J from the I-set, with sqrt(I6) taken from iset.i6.
InvariantSetJ j_from_i(const InvariantSetI& iset);

/// Same relations evaluated on a state, with sqrt(I6) taken as |Hdet|.
InvariantSetJ j_from_state(const PureState3Q& s);

struct InvariantMeans {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  /// Order: i2, i3, i4, i5ppp, i6, kempe, j1, j2, j3, j4, j5.
  std::array<double, 11> mean{};
  std::array<double, 11> std_error{};
};

/// Monte Carlo means of every invariant over n Haar states.
InvariantMeans ensemble_means(std::size_t n, std::uint64_t seed);

}  // namespace triq
