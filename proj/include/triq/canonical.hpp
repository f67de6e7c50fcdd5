#pragma once

#include <array>
#include <vector>

#include "triq/state.hpp"

namespace triq {

/// Coefficients below this magnitude are treated as exactly zero.
inline constexpr double kZeroCoefficient = 1e-12;

/// Five-term canonical form
///   l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>
/// with l_i >= 0 and phi in [0, pi].
struct AcinForm {
  std::array<double, 5> lambda{1.0, 0.0, 0.0, 0.0, 0.0};
  double phi = 0.0;
  /// Set when no admissible rotation leaves a nonzero |000> coefficient; the
  /// form is then l1|100> + l4|111> with l0 = 0.
  bool degenerate = false;
  /// Set when neither quadratic root produced phi in [0, pi] and the phase
  /// was reflected (phi -> 2 pi - phi). This only happens on a measure-zero
  /// set (coincident roots).
  bool reflected = false;

  double mu(std::size_t i) const { return lambda[i] * lambda[i]; }
};

/// (T_i)_{jk} = t^{ijk}.
struct SliceMatrices {
  Mat2 t0;
  Mat2 t1;
};

SliceMatrices slice(const PureState3Q& s);

/// Unitaries on qubit A, [[u00, u01], [-conj(u01), conj(u00)]], for which
/// det(u00 T0 + u01 T1) = 0. At most two from the quadratic's roots; the
/// "swap" (u00 = 0, u01 = 1) stands for a root at infinity.
std::vector<Mat2> nullifying_rotation(const SliceMatrices& m);

struct AcinDecomposition {
  AcinForm form;
  /// Local factors (A, B, C) taking the input to reconstruct(form), up to a
  /// global phase.
  std::array<Mat2, 3> unitary;
};

AcinDecomposition acin_decompose_full(const PureState3Q& s);

inline AcinForm acin_decompose(const PureState3Q& s) {
  return acin_decompose_full(s).form;
}

/// The literal five-term state.
PureState3Q reconstruct(const AcinForm& f);

}  // namespace triq
