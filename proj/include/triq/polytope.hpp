#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "triq/classes.hpp"
#include "triq/state.hpp"

namespace triq {

/// Minimal eigenvalues of the three single-qubit reductions.
struct PolytopePoint {
  std::array<double, 3> lmin{};
};

PolytopePoint polytope_point(const PureState3Q& s);

/// lambda_A <= lambda_B + lambda_C and its two permutations.
bool satisfies_polygon(const PolytopePoint& p, double tol = 1e-10);

/// Smallest slack of the three polygon inequalities (distance in coordinate
/// units from the lower faces through O).
double polygon_slack(const PolytopePoint& p);

/// Upper pyramid with apex G = (1/2, 1/2, 1/2): lambda_A + lambda_B + lambda_C >= 1.
bool in_ghz_pyramid(const PolytopePoint& p);

/// 420 [x (2x - 1)(1 - x)]^2 on [0, 1/2].
double lambda_min_pdf(double x);
double lambda_min_cdf(double x);
/// k-th moment of the single-qubit minimal eigenvalue over the Haar ensemble.
double lambda_min_moment(int k);

/// Named vertices: O = (0,0,0); A, B, C are the biseparable points with the
/// named qubit separated, e.g. A = (0, 1/2, 1/2); G = (1/2, 1/2, 1/2).
/// Names of every segment, triangle or tetrahedron from the set
/// {O, OA, OB, OC, OG, OAB, OAC, OBC, ABC, OAG, OBG, OCG, ABG, ACG, BCG, OABC}
/// containing p.
std::vector<std::string> polytope_regions(const PolytopePoint& p, double tol = 1e-9);

/// Regions listed for a class in the classification table (empty for 4b, 4c,
/// 4d and generic). The entry for 3b does not match where its generator
/// states fall; see polytope_regions on those states.
const std::vector<std::string>& class_polytope_regions(ClassId id);

class DensityGrid {
 public:
  explicit DensityGrid(std::size_t resolution = 80);

  std::size_t resolution() const { return res_; }
  std::uint64_t total() const { return total_; }
  double cell_width() const { return 0.5 / static_cast<double>(res_); }

  /// Cell of a coordinate in [0, 1/2]; the upper end falls in the last cell.
  std::size_t cell_of(double x) const;

  void add(const PolytopePoint& p);
  void merge(const DensityGrid& other);

  std::uint64_t count(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return counts_[(ix * res_ + iy) * res_ + iz];
  }
  /// count / (total * cell volume).
  double density(std::size_t ix, std::size_t iy, std::size_t iz) const;
  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  std::size_t res_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> counts_;
};

/// Cell of the section through O, C and G (the plane x = y), with in-plane
/// coordinates u = (x + y) / sqrt(2) and v = z of the cell center.
struct SliceCell {
  std::size_t ix = 0;
  std::size_t iy = 0;
  std::size_t iz = 0;
  double u = 0.0;
  double v = 0.0;
  double density = 0.0;
};

/// Cells within one cell width of the plane x = y.
std::vector<SliceCell> sep_c_ghz_slice(const DensityGrid& grid);

struct PolytopeSample {
  PolytopePoint point;
  double i6 = 0.0;
  bool pyramid = false;
};

struct PolytopeRun {
  DensityGrid grid;
  std::uint64_t pyramid_count = 0;
  std::uint64_t polygon_violations = 0;
  /// Per-state records, kept only when requested.
  std::vector<PolytopeSample> samples;
};

/// Samples n Haar states into a grid of the given resolution.
PolytopeRun density_grid(std::size_t n, std::size_t resolution, std::uint64_t seed,
                         std::size_t workers = 1, bool keep_samples = false);

}  // namespace triq
