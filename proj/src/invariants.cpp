#include "triq/invariants.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "triq/error.hpp"

namespace triq {

namespace {

double purity(const Mat2& rho) { return (rho * rho).trace().real(); }

double cube_trace(const Mat2& rho) { return (rho * rho * rho).trace().real(); }

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

InvariantSetJ j_relations(const InvariantSetI& iset, double root6) {
  InvariantSetJ j;
  j.j1 = 0.25 * (1.0 + iset.i2 - iset.i3 - iset.i4 - 2.0 * root6);
  j.j2 = 0.25 * (1.0 - iset.i2 + iset.i3 - iset.i4 - 2.0 * root6);
  j.j3 = 0.25 * (1.0 - iset.i2 - iset.i3 + iset.i4 - 2.0 * root6);
  j.j4 = root6;
  j.j5 = 0.25 * (3.0 - 3.0 * iset.i2 - 3.0 * iset.i3 - iset.i4 + 4.0 * iset.i5ppp - 2.0 * root6);
  return j;
}

}  // namespace

double InvariantSetJ::delta_j() const {
  const double s = j4 + j5;
  return s * s - 4.0 * (j1 + j4) * (j2 + j4) * (j3 + j4);
}

std::array<double, 3> purity_invariants(const PureState3Q& s) {
  return {purity(reduced_density(s, Party::A)), purity(reduced_density(s, Party::B)),
          purity(reduced_density(s, Party::C))};
}

double sextic_invariant(const PureState3Q& s) {
  const Mat4 rho_ab = reduced_density_pair(s, Party::C);
  const Mat4 prod = kron(reduced_density(s, Party::A), reduced_density(s, Party::B));
  return (prod * rho_ab).trace().real();
}

Amplitude hyperdeterminant(const PureState3Q& s) {
  const Amplitude a000 = s.at(0, 0, 0), a001 = s.at(0, 0, 1), a010 = s.at(0, 1, 0);
  const Amplitude a011 = s.at(0, 1, 1), a100 = s.at(1, 0, 0), a101 = s.at(1, 0, 1);
  const Amplitude a110 = s.at(1, 1, 0), a111 = s.at(1, 1, 1);

  const Amplitude d1 = a000 * a000 * a111 * a111 + a001 * a001 * a110 * a110 +
                       a010 * a010 * a101 * a101 + a100 * a100 * a011 * a011;
  const Amplitude d2 = a000 * a111 * (a011 * a100 + a101 * a010 + a110 * a001) +
                       a011 * a100 * (a101 * a010 + a110 * a001) + a101 * a010 * a110 * a001;
  const Amplitude d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;
  return d1 - 2.0 * d2 + 4.0 * d3;
}

double kempe_invariant(const PureState3Q& s) {
  const Mat2 ra = reduced_density(s, Party::A);
  const Mat2 rb = reduced_density(s, Party::B);
  const Mat4 rho_ab = reduced_density_pair(s, Party::C);
  return 3.0 * (kron(ra, rb) * rho_ab).trace().real() - cube_trace(ra) - cube_trace(rb);
}

double kempe_from_acin(const AcinForm& f) {
  const double l1 = f.lambda[1], l2 = f.lambda[2], l3 = f.lambda[3], l4 = f.lambda[4];
  const double m1 = l1 * l1, m2 = l2 * l2, m3 = l3 * l3, m4 = l4 * l4;
  return 1.0 - 3.0 * m4 - 3.0 * m3 + 3.0 * m3 * m3 + 3.0 * m4 * m4 + 3.0 * m1 * m3 +
         6.0 * m3 * m4 +
         (m1 * (3.0 - 6.0 * m3) - 3.0 * (m3 - 1.0) * (2.0 * m3 + 2.0 * m4 - 1.0)) * m2 +
         6.0 * l1 * l3 * l4 * (m1 + m2 + m3 + m4) * l2 * std::cos(f.phi) +
         (3.0 - 6.0 * m3) * m2 * m2;
}

InvariantSetI invariants_i(const PureState3Q& s) {
  const Mat2 ra = reduced_density(s, Party::A);
  const Mat2 rb = reduced_density(s, Party::B);
  const Mat2 rc = reduced_density(s, Party::C);
  const Mat4 rho_ab = reduced_density_pair(s, Party::C);
  const double sextic = (kron(ra, rb) * rho_ab).trace().real();

  InvariantSetI out;
  out.i2 = purity(ra);
  out.i3 = purity(rb);
  out.i4 = purity(rc);
  out.i5ppp = sextic;
  out.i6 = std::norm(hyperdeterminant(s));
  out.kempe = 3.0 * sextic - cube_trace(ra) - cube_trace(rb);
  return out;
}

InvariantSetJ j_from_acin(const AcinForm& f) {
  const double m0 = f.mu(0), m1 = f.mu(1), m2 = f.mu(2), m3 = f.mu(3), m4 = f.mu(4);
  const Amplitude z = std::polar(f.lambda[1] * f.lambda[4], f.phi) - f.lambda[2] * f.lambda[3];
  InvariantSetJ j;
  j.j1 = std::norm(z);
  j.j2 = m0 * m2;
  j.j3 = m0 * m3;
  j.j4 = m0 * m4;
  j.j5 = m0 * (j.j1 + m2 * m3 - m1 * m4);
  return j;
}

InvariantSetJ j_from_i(const InvariantSetI& iset) {
  return j_relations(iset, std::sqrt(std::max(0.0, iset.i6)));
}

InvariantSetJ j_from_state(const PureState3Q& s) {
  return j_relations(invariants_i(s), std::abs(hyperdeterminant(s)));
}

InvariantMeans ensemble_means(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw DomainError("ensemble_means needs at least two samples");
  Rng rng(RngSeed{seed});
  std::array<double, 11> sum{};
  std::array<double, 11> sum2{};
  for (std::size_t t = 0; t < n; ++t) {
    const PureState3Q s = sample_haar_state(rng);
    const InvariantSetI iset = invariants_i(s);
    const InvariantSetJ j = j_from_acin(acin_decompose(s));
    const std::array<double, 11> v{iset.i2, iset.i3, iset.i4, iset.i5ppp, iset.i6, iset.kempe,
                                   j.j1,    j.j2,    j.j3,    j.j4,        j.j5};
    for (std::size_t k = 0; k < v.size(); ++k) {
      sum[k] += v[k];
      sum2[k] += v[k] * v[k];
    }
  }
  InvariantMeans out;
  out.n = n;
  out.seed = seed;
  const double dn = static_cast<double>(n);
  for (std::size_t k = 0; k < sum.size(); ++k) {
    out.mean[k] = sum[k] / dn;
    const double var = std::max(0.0, (sum2[k] / dn - out.mean[k] * out.mean[k]) * dn / (dn - 1.0));
    out.std_error[k] = std::sqrt(var / dn);
  }
  return out;
}

}  // namespace triq
