#include <doctest.h>

#include <cmath>
#include <numbers>

#include "contraction_oracle.hpp"
#include "triq/canonical.hpp"
#include "triq/classes.hpp"
#include "triq/error.hpp"
#include "triq/invariants.hpp"

using namespace triq;

namespace {

constexpr double kPi = std::numbers::pi;

LocalUnitary random_local(Rng& rng) {
  LocalUnitary::Angles a{};
  for (double& x : a) x = rng.uniform(0.0, 2.0 * kPi);
  return LocalUnitary(a);
}

}  // namespace

TEST_CASE("GHZ invariants") {
  const InvariantSetI i = invariants_i(PureState3Q::ghz());
  CHECK(i.i2 == doctest::Approx(0.5));
  CHECK(i.i3 == doctest::Approx(0.5));
  CHECK(i.i4 == doctest::Approx(0.5));
  CHECK(i.i5ppp == doctest::Approx(0.25));
  CHECK(i.i6 == doctest::Approx(1.0 / 16.0));
  CHECK(i.kempe == doctest::Approx(0.25));
  CHECK(std::abs(hyperdeterminant(PureState3Q::ghz())) == doctest::Approx(0.25));
}

TEST_CASE("product state invariants") {
  const InvariantSetI i = invariants_i(PureState3Q::basis(0, 1, 1));
  CHECK(i.i2 == doctest::Approx(1.0));
  CHECK(i.i5ppp == doctest::Approx(1.0));
  CHECK(i.i6 == doctest::Approx(0.0));
  CHECK(i.kempe == doctest::Approx(1.0));
}

TEST_CASE("J invariants of GHZ and W") {
  const InvariantSetJ g = j_from_acin(acin_decompose(PureState3Q::ghz()));
  CHECK(g.j4 == doctest::Approx(0.25));
  CHECK(g.j1 == doctest::Approx(0.0));
  CHECK(g.j5 == doctest::Approx(0.0));

  const InvariantSetJ w = j_from_acin(acin_decompose(PureState3Q::w()));
  CHECK(w.j1 == doctest::Approx(1.0 / 9.0));
  CHECK(w.j2 == doctest::Approx(1.0 / 9.0));
  CHECK(w.j3 == doctest::Approx(1.0 / 9.0));
  CHECK(w.j4 == doctest::Approx(0.0));
  CHECK(w.j5 == doctest::Approx(2.0 / 27.0));
}

TEST_CASE("purity, sextic and tangle agree with their contraction forms") {
  Rng rng(RngSeed{31});
  for (int t = 0; t < 300; ++t) {
    const auto s = sample_haar_state(rng);
    const InvariantSetI i = invariants_i(s);
    CHECK(std::abs(i.i2 - oracle::purity(s, 0)) < 1e-12);
    CHECK(std::abs(i.i3 - oracle::purity(s, 1)) < 1e-12);
    CHECK(std::abs(i.i4 - oracle::purity(s, 2)) < 1e-12);
    CHECK(std::abs(i.i5ppp - oracle::sextic(s)) < 1e-12);
    CHECK(std::abs(i.i6 - oracle::sextic_tangle_invariant(s)) < 1e-12);
  }
}

TEST_CASE("Kempe invariant: trace, contraction and canonical forms agree") {
  Rng rng(RngSeed{32});
  for (int t = 0; t < 300; ++t) {
    const auto s = sample_haar_state(rng);
    const double trace_form = kempe_invariant(s);
    CHECK(std::abs(trace_form - oracle::kempe(s)) < 1e-10);
    CHECK(std::abs(trace_form - kempe_from_acin(acin_decompose(s))) < 1e-10);
    CHECK(std::abs(trace_form - invariants_i(s).kempe) < 1e-14);
  }
}

TEST_CASE("J from I agrees with J from the canonical form") {
  Rng rng(RngSeed{33});
  for (int t = 0; t < 1000; ++t) {
    const auto s = sample_haar_state(rng);
    const InvariantSetJ a = j_from_acin(acin_decompose(s));
    const InvariantSetJ b = j_from_i(invariants_i(s));
    const InvariantSetJ c = j_from_state(s);
    CHECK(std::abs(a.j1 - b.j1) < 1e-10);
    CHECK(std::abs(a.j2 - b.j2) < 1e-10);
    CHECK(std::abs(a.j3 - b.j3) < 1e-10);
    CHECK(std::abs(a.j4 - b.j4) < 1e-10);
    CHECK(std::abs(a.j5 - b.j5) < 1e-10);
    CHECK(std::abs(a.j4 - c.j4) < 1e-10);
    CHECK(std::abs(b.j4 - std::sqrt(invariants_i(s).i6)) < 1e-14);
  }
}

TEST_CASE("invariants are unchanged by local unitaries") {
  Rng rng(RngSeed{34});
  for (int t = 0; t < 300; ++t) {
    const auto s = sample_haar_state(rng);
    const auto u = apply_local(random_local(rng), s);
    const InvariantSetI a = invariants_i(s), b = invariants_i(u);
    CHECK(std::abs(a.i2 - b.i2) < 1e-12);
    CHECK(std::abs(a.i3 - b.i3) < 1e-12);
    CHECK(std::abs(a.i4 - b.i4) < 1e-12);
    CHECK(std::abs(a.i5ppp - b.i5ppp) < 1e-12);
    CHECK(std::abs(a.i6 - b.i6) < 1e-12);
    CHECK(std::abs(a.kempe - b.kempe) < 1e-12);
  }
}

TEST_CASE("invariant ranges") {
  Rng rng(RngSeed{35});
  for (int t = 0; t < 2000; ++t) {
    const InvariantSetI i = invariants_i(sample_haar_state(rng));
    CHECK(i.i2 >= 0.5 - 1e-12);
    CHECK(i.i2 <= 1.0 + 1e-12);
    CHECK(i.i6 >= 0.0);
    CHECK(i.i6 <= 1.0 / 16.0 + 1e-12);
    CHECK(i.kempe >= 2.0 / 9.0 - 1e-12);
    CHECK(i.kempe <= 1.0 + 1e-12);
  }
}

TEST_CASE("ensemble means are close to the exact Haar values") {
  const InvariantMeans m = ensemble_means(20000, 36);
  CHECK(m.n == 20000);
  CHECK(std::abs(m.mean[0] - 2.0 / 3.0) < 5.0 * m.std_error[0] + 1e-12);
  CHECK(std::abs(m.mean[4] - 1.0 / 110.0) < 5.0 * m.std_error[4] + 1e-12);
  CHECK(std::abs(m.mean[5] - 2.0 / 5.0) < 5.0 * m.std_error[5] + 1e-12);
  CHECK_THROWS_AS(ensemble_means(1, 0), DomainError);
}
