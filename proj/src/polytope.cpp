#include "triq/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "triq/error.hpp"
#include "triq/invariants.hpp"
#include "triq/parallel.hpp"

namespace triq {

namespace {

using Vec3 = Eigen::Vector3d;

const std::map<char, Vec3>& vertices() {
  static const std::map<char, Vec3> v{{'O', Vec3(0.0, 0.0, 0.0)}, {'A', Vec3(0.0, 0.5, 0.5)},
                                      {'B', Vec3(0.5, 0.0, 0.5)}, {'C', Vec3(0.5, 0.5, 0.0)},
                                      {'G', Vec3(0.5, 0.5, 0.5)}};
  return v;
}

// Whether x lies in the convex hull of the listed vertices (at most four,
// affinely independent), within tol.
bool in_simplex(const Vec3& x, const std::string& name, double tol) {
  const auto& v = vertices();
  const Vec3 origin = v.at(name[0]);
  const Eigen::Index k = static_cast<Eigen::Index>(name.size()) - 1;
  if (k == 0) return (x - origin).norm() <= tol;
  Eigen::MatrixXd edges(3, k);
  for (Eigen::Index c = 0; c < k; ++c) edges.col(c) = v.at(name[static_cast<std::size_t>(c + 1)]) - origin;
  const Eigen::VectorXd w = edges.colPivHouseholderQr().solve(x - origin);
  if ((edges * w - (x - origin)).norm() > tol) return false;
  // Barycentric weights; scale the tolerance by the edge length (1/sqrt(2)).
  const double slack = 2.0 * tol;
  if (w.minCoeff() < -slack) return false;
  return w.sum() <= 1.0 + slack;
}

const std::vector<std::string> kRegionNames{"O",   "OA",  "OB",  "OC",  "OG",  "OAB", "OAC", "OBC",
                                            "ABC", "OAG", "OBG", "OCG", "ABG", "ACG", "BCG", "OABC"};

}  // namespace

PolytopePoint polytope_point(const PureState3Q& s) {
  PolytopePoint p;
  for (Party party : kParties) {
    p.lmin[static_cast<std::size_t>(party)] = reduced_spectrum(s, party).smaller;
  }
  return p;
}

double polygon_slack(const PolytopePoint& p) {
  const auto& l = p.lmin;
  return std::min({l[1] + l[2] - l[0], l[0] + l[2] - l[1], l[0] + l[1] - l[2]});
}

bool satisfies_polygon(const PolytopePoint& p, double tol) { return polygon_slack(p) >= -tol; }

bool in_ghz_pyramid(const PolytopePoint& p) { return p.lmin[0] + p.lmin[1] + p.lmin[2] >= 1.0; }

double lambda_min_pdf(double x) {
  if (!(x >= 0.0 && x <= 0.5)) throw DomainError("lambda_min outside [0, 1/2]");
  const double v = x * (2.0 * x - 1.0) * (1.0 - x);
  return 420.0 * v * v;
}

double lambda_min_cdf(double x) {
  if (!(x >= 0.0 && x <= 0.5)) throw DomainError("lambda_min outside [0, 1/2]");
  // Antiderivative of 1680x^6 - 5040x^5 + 5460x^4 - 2520x^3 + 420x^2.
  return x * x * x * (140.0 + x * (-630.0 + x * (1092.0 + x * (-840.0 + x * 240.0))));
}

double lambda_min_moment(int k) {
  if (k < 0) throw DomainError("moment order must be nonnegative");
  const double kk = static_cast<double>(k);
  auto ratio = [kk](double a, double b) { return std::exp(std::lgamma(kk + a) - std::lgamma(kk + b)); };
  return 105.0 / std::pow(2.0, kk) * (ratio(3, 6) - ratio(4, 7) + ratio(5, 8) / 4.0);
}

std::vector<std::string> polytope_regions(const PolytopePoint& p, double tol) {
  const Vec3 x(p.lmin[0], p.lmin[1], p.lmin[2]);
  std::vector<std::string> out;
  for (const auto& name : kRegionNames)
    if (in_simplex(x, name, tol)) out.push_back(name);
  return out;
}

const std::vector<std::string>& class_polytope_regions(ClassId id) {
  static const std::array<std::vector<std::string>, 10> table{{
      {"O"},
      {"OA", "OB", "OC"},
      {"OG"},
      {"OAB", "OAC", "OBC", "ABC"},
      {"ABG", "ACG", "BCG"},
      {"OABC"},
      {},
      {},
      {},
      {},
  }};
  return table[static_cast<std::size_t>(id)];
}

DensityGrid::DensityGrid(std::size_t resolution)
    : res_(resolution), counts_(resolution * resolution * resolution, 0) {
  if (resolution == 0) throw DomainError("grid resolution must be positive");
}

std::size_t DensityGrid::cell_of(double x) const {
  const double scaled = std::clamp(x, 0.0, 0.5) * 2.0 * static_cast<double>(res_);
  return std::min(static_cast<std::size_t>(scaled), res_ - 1);
}

void DensityGrid::add(const PolytopePoint& p) {
  const std::size_t ix = cell_of(p.lmin[0]), iy = cell_of(p.lmin[1]), iz = cell_of(p.lmin[2]);
  ++counts_[(ix * res_ + iy) * res_ + iz];
  ++total_;
}

void DensityGrid::merge(const DensityGrid& other) {
  if (other.res_ != res_) throw DomainError("cannot merge grids of different resolution");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

double DensityGrid::density(std::size_t ix, std::size_t iy, std::size_t iz) const {
  if (total_ == 0) return 0.0;
  const double h = cell_width();
  return static_cast<double>(count(ix, iy, iz)) / (static_cast<double>(total_) * h * h * h);
}

std::vector<SliceCell> sep_c_ghz_slice(const DensityGrid& grid) {
  std::vector<SliceCell> out;
  const std::size_t n = grid.resolution();
  const double h = grid.cell_width();
  for (std::size_t ix = 0; ix < n; ++ix) {
    for (std::size_t iy = (ix == 0 ? 0 : ix - 1); iy <= std::min(n - 1, ix + 1); ++iy) {
      for (std::size_t iz = 0; iz < n; ++iz) {
        SliceCell c;
        c.ix = ix;
        c.iy = iy;
        c.iz = iz;
        const double cx = (static_cast<double>(ix) + 0.5) * h;
        const double cy = (static_cast<double>(iy) + 0.5) * h;
        c.u = (cx + cy) / std::sqrt(2.0);
        c.v = (static_cast<double>(iz) + 0.5) * h;
        c.density = grid.density(ix, iy, iz);
        out.push_back(c);
      }
    }
  }
  return out;
}

PolytopeRun density_grid(std::size_t n, std::size_t resolution, std::uint64_t seed,
                         std::size_t workers, bool keep_samples) {
  PolytopeRun run{DensityGrid(resolution), 0, 0, {}};
  if (keep_samples) run.samples.reserve(n);

  struct Partial {
    std::vector<PolytopePoint> points;
    std::uint64_t pyramid = 0;
    std::uint64_t violations = 0;
    std::vector<PolytopeSample> samples;
  };
  auto work = [&](const Block& b) {
    Partial part;
    part.points.reserve(b.count);
    Rng rng(RngSeed{seed}, b.index);
    for (std::size_t i = 0; i < b.count; ++i) {
      const PureState3Q s = sample_haar_state(rng);
      PolytopeSample rec;
      rec.point = polytope_point(s);
      rec.pyramid = in_ghz_pyramid(rec.point);
      part.points.push_back(rec.point);
      part.pyramid += rec.pyramid ? 1 : 0;
      part.violations += satisfies_polygon(rec.point) ? 0 : 1;
      if (keep_samples) {
        rec.i6 = std::norm(hyperdeterminant(s));
        part.samples.push_back(rec);
      }
    }
    return part;
  };
  auto sink = [&](Partial&& part) {
    for (const auto& p : part.points) run.grid.add(p);
    run.pyramid_count += part.pyramid;
    run.polygon_violations += part.violations;
    run.samples.insert(run.samples.end(), part.samples.begin(), part.samples.end());
  };
  run_blocks(n, workers, kDefaultBlockSize, work, sink);
  return run;
}

}  // namespace triq
