#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "triq/parallel.hpp"
#include "triq/state.hpp"
#include "triq/stats.hpp"

namespace triq {

enum class Quantity : std::size_t {
  I2, I3, I4, I5ppp, I6, Kempe,
  J1, J2, J3, J4, J5,
  Lambda0, Lambda1, Lambda2, Lambda3, Lambda4, Phi,
  LminA, LminB, LminC,
};

inline constexpr std::size_t kQuantityCount = 20;

struct QuantityInfo {
  std::string_view name;
  double lo;
  double hi;
};

/// Name and histogram support of every per-state quantity, in enum order.
const std::array<QuantityInfo, kQuantityCount>& quantity_table();

inline std::size_t index_of(Quantity q) { return static_cast<std::size_t>(q); }

using Record = std::array<double, kQuantityCount>;

struct Measurement {
  Record values{};
  bool degenerate = false;
  bool pyramid = false;
  bool polygon_ok = true;
};

/// Every invariant, canonical coefficient and polytope coordinate of s.
Measurement measure(const PureState3Q& s);

struct EnsembleOptions {
  std::size_t n = 100000;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::size_t bins = 200;
  std::size_t block_size = kDefaultBlockSize;
  /// Quantities whose raw samples are retained (for KS tests).
  std::vector<Quantity> keep;
};

struct EnsembleResult {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::array<CompensatedSum, kQuantityCount> sum{};
  std::array<CompensatedSum, kQuantityCount> sum_sq{};
  std::vector<Histogram> histograms;
  std::uint64_t pyramid_count = 0;
  std::uint64_t polygon_violations = 0;
  std::uint64_t degenerate_count = 0;
  /// Indexed by quantity; empty unless requested.
  std::array<std::vector<double>, kQuantityCount> samples;

  double mean(Quantity q) const;
  double second_moment(Quantity q) const;
};

/// Samples n Haar states in blocks; block b draws from stream (seed, b), and
/// partial results merge in block order, so the result does not depend on
/// the number of workers.
EnsembleResult run_ensemble(const EnsembleOptions& options);

/// Same sampling as run_ensemble, handing each record to `sink` in index order.
void stream_ensemble(const EnsembleOptions& options,
                     const std::function<void(std::size_t, const Measurement&)>& sink);

struct MomentCheck {
  std::string name;
  double empirical = 0.0;
  double exact = 0.0;
  double tolerance = 0.0;

  bool pass() const;
};

/// Empirical Haar moments against their exact values.
std::vector<MomentCheck> moment_checks(const EnsembleResult& r);

}  // namespace triq
