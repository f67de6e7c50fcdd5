#include "triq/ensemble.hpp"

#include <cmath>
#include <numbers>

#include "triq/canonical.hpp"
#include "triq/error.hpp"
#include "triq/invariants.hpp"
#include "triq/polytope.hpp"

namespace triq {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

const std::array<QuantityInfo, kQuantityCount>& quantity_table() {
  static const std::array<QuantityInfo, kQuantityCount> table{{
      {"i2", 0.5, 1.0},       {"i3", 0.5, 1.0},       {"i4", 0.5, 1.0},
      {"i5ppp", 0.25, 1.0},   {"i6", 0.0, 1.0 / 16.0}, {"kempe", 2.0 / 9.0, 1.0},
      {"j1", 0.0, 0.25},      {"j2", 0.0, 0.25},      {"j3", 0.0, 0.25},
      {"j4", 0.0, 0.25},      {"j5", -0.25, 0.25},    {"lambda0", 0.0, 1.0},
      {"lambda1", 0.0, 1.0},  {"lambda2", 0.0, 1.0},  {"lambda3", 0.0, 1.0},
      {"lambda4", 0.0, 1.0},  {"phi", 0.0, kPi},      {"lmin_a", 0.0, 0.5},
      {"lmin_b", 0.0, 0.5},   {"lmin_c", 0.0, 0.5},
  }};
  return table;
}

Measurement measure(const PureState3Q& s) {
  Measurement m;
  const InvariantSetI iset = invariants_i(s);
  const AcinForm f = acin_decompose(s);
  const InvariantSetJ j = j_from_acin(f);
  const PolytopePoint p = polytope_point(s);

  m.values = {iset.i2, iset.i3, iset.i4, iset.i5ppp, iset.i6, iset.kempe, j.j1,
              j.j2,    j.j3,    j.j4,    j.j5,       f.lambda[0], f.lambda[1], f.lambda[2],
              f.lambda[3], f.lambda[4], f.phi, p.lmin[0], p.lmin[1], p.lmin[2]};
  m.degenerate = f.degenerate;
  m.pyramid = in_ghz_pyramid(p);
  m.polygon_ok = satisfies_polygon(p);
  return m;
}

double EnsembleResult::mean(Quantity q) const {
  return n == 0 ? 0.0 : sum[index_of(q)].value() / static_cast<double>(n);
}

double EnsembleResult::second_moment(Quantity q) const {
  return n == 0 ? 0.0 : sum_sq[index_of(q)].value() / static_cast<double>(n);
}

EnsembleResult run_ensemble(const EnsembleOptions& options) {
  if (options.n < 1) throw DomainError("ensemble size must be positive");
  const auto& table = quantity_table();
  std::array<bool, kQuantityCount> keep{};
  for (Quantity q : options.keep) keep[index_of(q)] = true;

  auto fresh = [&] {
    EnsembleResult r;
    for (const auto& info : table) r.histograms.emplace_back(info.lo, info.hi, options.bins);
    return r;
  };

  EnsembleResult total = fresh();
  total.n = options.n;
  total.seed = options.seed;

  auto work = [&](const Block& b) {
    EnsembleResult part = fresh();
    Rng rng(RngSeed{options.seed}, b.index);
    for (std::size_t i = 0; i < b.count; ++i) {
      const Measurement m = measure(sample_haar_state(rng));
      for (std::size_t k = 0; k < kQuantityCount; ++k) {
        const double v = m.values[k];
        part.sum[k].add(v);
        part.sum_sq[k].add(v * v);
        part.histograms[k].add(v);
        if (keep[k]) part.samples[k].push_back(v);
      }
      part.pyramid_count += m.pyramid ? 1 : 0;
      part.polygon_violations += m.polygon_ok ? 0 : 1;
      part.degenerate_count += m.degenerate ? 1 : 0;
    }
    return part;
  };
  auto sink = [&](EnsembleResult&& part) {
    for (std::size_t k = 0; k < kQuantityCount; ++k) {
      total.sum[k].merge(part.sum[k]);
      total.sum_sq[k].merge(part.sum_sq[k]);
      total.histograms[k].merge(part.histograms[k]);
      total.samples[k].insert(total.samples[k].end(), part.samples[k].begin(), part.samples[k].end());
    }
    total.pyramid_count += part.pyramid_count;
    total.polygon_violations += part.polygon_violations;
    total.degenerate_count += part.degenerate_count;
  };
  run_blocks(options.n, options.workers, options.block_size, work, sink);
  return total;
}

void stream_ensemble(const EnsembleOptions& options,
                     const std::function<void(std::size_t, const Measurement&)>& sink) {
  auto work = [&](const Block& b) {
    std::vector<Measurement> out;
    out.reserve(b.count);
    Rng rng(RngSeed{options.seed}, b.index);
    for (std::size_t i = 0; i < b.count; ++i) out.push_back(measure(sample_haar_state(rng)));
    return std::make_pair(b.begin, std::move(out));
  };
  run_blocks(options.n, options.workers, options.block_size, work, [&](auto&& part) {
    for (std::size_t i = 0; i < part.second.size(); ++i) sink(part.first + i, part.second[i]);
  });
}

bool MomentCheck::pass() const { return std::abs(empirical - exact) <= tolerance; }

std::vector<MomentCheck> moment_checks(const EnsembleResult& r) {
  using Q = Quantity;
  std::vector<MomentCheck> out{
      {"<I2>", r.mean(Q::I2), 2.0 / 3.0, 0.01},
      {"<I3>", r.mean(Q::I3), 2.0 / 3.0, 0.01},
      {"<I4>", r.mean(Q::I4), 2.0 / 3.0, 0.01},
      {"<I5'''>", r.mean(Q::I5ppp), 7.0 / 15.0, 0.005},
      {"<I5'''^2>", r.second_moment(Q::I5ppp), 133.0 / 572.0, 0.005},
      {"<I6>", r.mean(Q::I6), 1.0 / 110.0, 0.0005},
      {"<Kempe>", r.mean(Q::Kempe), 2.0 / 5.0, 0.005},
      {"<Kempe^2>", r.second_moment(Q::Kempe), 499.0 / 2860.0, 0.005},
      {"<J1>", r.mean(Q::J1), 1.0 / 24.0, 0.003},
      {"<J2>", r.mean(Q::J2), 1.0 / 24.0, 0.003},
      {"<J3>", r.mean(Q::J3), 1.0 / 24.0, 0.003},
      {"<J4>", r.mean(Q::J4), 1.0 / 12.0, 0.003},
      {"<J5>", r.mean(Q::J5), 1.0 / 120.0, 0.003},
  };
  const double lmin = (r.mean(Q::LminA) + r.mean(Q::LminB) + r.mean(Q::LminC)) / 3.0;
  out.push_back({"<lambda_min>", lmin, 29.0 / 128.0, 0.002});
  return out;
}

}  // namespace triq
