#include "triq/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "triq/canonical.hpp"
#include "triq/classes.hpp"
#include "triq/ensemble.hpp"
#include "triq/error.hpp"
#include "triq/invariants.hpp"
#include "triq/io.hpp"
#include "triq/optimize.hpp"
#include "triq/polytope.hpp"
#include "triq/stats.hpp"

namespace triq::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr double kPyramidFraction = 13.0 / 216.0;
constexpr std::size_t kScatterDefault = 10000;
constexpr std::size_t kGridDefault = 80;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << content;
  if (!f) throw Error("write failed for " + p.string());
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

// Writes to --out when given (and not "-"), otherwise to the output stream.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    out << text;
  } else {
    write_file(cfg.out, text);
  }
}

json state_json(const PureState3Q& s) {
  json amp = json::array();
  for (std::size_t m = 0; m < PureState3Q::kDim; ++m) amp.push_back({s[m].real(), s[m].imag()});
  return json{{"amp", amp}};
}

json angles_json(const LocalUnitary& u) {
  json out = json::array();
  for (std::size_t q = 0; q < 3; ++q) {
    out.push_back({u.angles()[3 * q], u.angles()[3 * q + 1], u.angles()[3 * q + 2]});
  }
  return out;
}

json i_json(const InvariantSetI& i) {
  return {{"i2", i.i2}, {"i3", i.i3}, {"i4", i.i4}, {"i5ppp", i.i5ppp}, {"i6", i.i6}, {"kempe", i.kempe}};
}

json j_json(const InvariantSetJ& j) {
  return {{"j1", j.j1}, {"j2", j.j2}, {"j3", j.j3}, {"j4", j.j4}, {"j5", j.j5}};
}

double parse_q(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "inf" || t == "infinity") return kRenyiInfinity;
  double q = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), q);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !(q >= 0.0)) {
    throw UsageError("--q expects a nonnegative number or 'inf', got '" + text + "'");
  }
  return q;
}

ClassId parse_class(const std::string& text) {
  const auto id = parse_class_name(text);
  if (!id || *id == ClassId::Generic) {
    throw UsageError("unknown class '" + text + "' (expected one of 1, 2a, 2b, 3a, 3b, 4a, 4b, 4c, 4d)");
  }
  return *id;
}

std::string_view seed_source_name(SeedSource s) {
  switch (s) {
    case SeedSource::Flag:
      return "flag";
    case SeedSource::Environment:
      return "environment";
    case SeedSource::Random:
      break;
  }
  return "random";
}

// ---------------------------------------------------------------------------
// Ensemble exports

std::optional<std::string> analytic_for(std::string_view quantity) {
  if (quantity == "i2" || quantity == "i3" || quantity == "i4") return "ik";
  if (quantity == "i5ppp" || quantity == "i6" || quantity == "j4" || quantity == "kempe" ||
      quantity == "phi") {
    return std::string(quantity);
  }
  if (quantity.substr(0, 4) == "lmin") return "lambda_min";
  return std::nullopt;
}

using Column = std::pair<std::string, std::function<double(double)>>;

std::string histogram_csv(const Histogram& h, const std::vector<Column>& extra) {
  std::ostringstream os;
  os << kCsvSchemaLine << "\n"
     << "bin_center,density";
  for (const auto& c : extra) os << ',' << c.first;
  os << "\n";
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double x = h.center(i);
    os << num(x) << ',' << num(h.density(i));
    for (const auto& c : extra) os << ',' << num(c.second(x));
    os << "\n";
  }
  return os.str();
}

struct FitPair {
  std::optional<BetaLikeFit> moments;
  std::optional<BetaLikeFit> least_squares;
  std::string error;
};

FitPair fit_both(const Histogram& h) {
  FitPair f;
  try {
    f.moments = fit_beta_like(h, FitMethod::Moments);
    f.least_squares = fit_beta_like(h, FitMethod::LeastSquares);
  } catch (const FitDiverged& e) {
    f.error = e.what();
  }
  return f;
}

json fit_json(const std::optional<BetaLikeFit>& f) {
  if (!f) return nullptr;
  return {{"a", f->a}, {"b", f->b}, {"c", f->c}, {"lo", f->lo}, {"hi", f->hi}, {"normalized", f->normalized}};
}

struct ReferenceFit {
  double a, b, c;
};

// Published best-fit constants of c x^a (1 - x)^b for lambda_0..lambda_4.
constexpr std::array<ReferenceFit, 5> kReferenceFits{{
    {3.74, 6.05, 1856.85},
    {67.76, 4.25, 1.52},
    {68.40, 4.27, 1.53},
    {66.75, 4.24, 1.52},
    {795.16, 4.37, 3.96},
}};

// The published columns do not always follow the (a, b, c) labelling. Reports
// which reading of the reference row is closest to our fit in log distance.
std::string best_reference_columns(const BetaLikeFit& fit, const ReferenceFit& ref) {
  const std::array<double, 3> ours{fit.a, fit.b, fit.c};
  const std::array<double, 3> theirs{ref.a, ref.b, ref.c};
  std::array<int, 3> perm{0, 1, 2};
  std::array<int, 3> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int k = 0; k < 3; ++k) {
      cost += std::abs(std::log(std::abs(ours[k]) + 1e-12) - std::log(std::abs(theirs[perm[k]]) + 1e-12));
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  const char* names = "abc";
  std::string out;
  for (int k = 0; k < 3; ++k) {
    out += std::string(1, names[k]) + "=" + std::string(1, names[best[k]]);
    if (k < 2) out += ",";
  }
  return out;
}

json fits_json(const EnsembleResult& r) {
  json fits = json::object();
  for (std::size_t k = 0; k < 5; ++k) {
    const auto q = static_cast<Quantity>(index_of(Quantity::Lambda0) + k);
    const FitPair f = fit_both(r.histograms[index_of(q)]);
    const ReferenceFit& ref = kReferenceFits[k];
    json entry{{"moments", fit_json(f.moments)},
               {"least_squares", fit_json(f.least_squares)},
               {"reference", {{"a", ref.a}, {"b", ref.b}, {"c", ref.c}}}};
    if (f.least_squares) entry["reference_columns"] = best_reference_columns(*f.least_squares, ref);
    if (!f.error.empty()) entry["error"] = f.error;
    fits[std::string(quantity_table()[index_of(q)].name)] = entry;
  }
  return json{{"schema", "triq-lab/fits/v1"},
              {"n", r.n},
              {"seed", r.seed},
              {"model", "c * x^a * (1 - x)^b on [0, 1]"},
              {"fits", fits}};
}

json moments_json(const EnsembleResult& r, bool& all_pass) {
  all_pass = true;
  json checks = json::array();
  for (const MomentCheck& c : moment_checks(r)) {
    all_pass = all_pass && c.pass();
    checks.push_back({{"name", c.name},
                      {"empirical", c.empirical},
                      {"exact", c.exact},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass()}});
  }
  json means = json::object();
  for (std::size_t k = 0; k < kQuantityCount; ++k) {
    means[std::string(quantity_table()[k].name)] = r.sum[k].value() / static_cast<double>(r.n);
  }
  return json{{"schema", "triq-lab/moments/v1"},
              {"n", r.n},
              {"seed", r.seed},
              {"checks", checks},
              {"all_pass", all_pass},
              {"means", means},
              {"degenerate_count", r.degenerate_count},
              {"polygon_violations", r.polygon_violations},
              {"pyramid_fraction", static_cast<double>(r.pyramid_count) / static_cast<double>(r.n)}};
}

std::vector<Column> fit_columns(const FitPair& f) {
  std::vector<Column> cols;
  if (f.moments) cols.push_back({"fit_moments", [m = *f.moments](double x) { return m.pdf(x); }});
  if (f.least_squares) {
    cols.push_back({"fit_least_squares", [m = *f.least_squares](double x) { return m.pdf(x); }});
  }
  return cols;
}

void write_histograms(const fs::path& dir, const EnsembleResult& r, const std::vector<Quantity>& which) {
  for (Quantity q : which) {
    const auto name = quantity_table()[index_of(q)].name;
    std::vector<Column> cols;
    if (const auto a = analytic_for(name)) {
      cols.push_back({"analytic", [a = *a](double x) { return analytic_pdf(a, x); }});
    }
    if (q >= Quantity::Lambda0 && q <= Quantity::Lambda4) {
      for (auto& c : fit_columns(fit_both(r.histograms[index_of(q)]))) cols.push_back(std::move(c));
    }
    write_file(dir / ("hist_" + std::string(name) + ".csv"), histogram_csv(r.histograms[index_of(q)], cols));
  }
}

std::vector<Quantity> all_quantities() {
  std::vector<Quantity> q;
  for (std::size_t k = 0; k < kQuantityCount; ++k) q.push_back(static_cast<Quantity>(k));
  return q;
}

double five_term_shannon(const Measurement& m) {
  std::array<double, 5> mu{};
  for (std::size_t k = 0; k < 5; ++k) {
    const double l = m.values[index_of(Quantity::Lambda0) + k];
    mu[k] = l * l;
  }
  return renyi_entropy(mu, 1.0);
}

// Per-state scatter data: the listed quantities plus the Shannon entropy of
// the five-term probabilities.
void write_scatter(const fs::path& path, const EnsembleOptions& base, std::size_t count,
                   const std::vector<Quantity>& cols) {
  EnsembleOptions opt = base;
  opt.n = std::min(count, base.n);
  std::ostringstream os;
  os << kCsvSchemaLine << "\n";
  for (Quantity q : cols) os << quantity_table()[index_of(q)].name << ',';
  os << "s1\n";
  stream_ensemble(opt, [&](std::size_t, const Measurement& m) {
    for (Quantity q : cols) os << num(m.values[index_of(q)]) << ',';
    os << num(five_term_shannon(m)) << "\n";
  });
  write_file(path, os.str());
}

// ---------------------------------------------------------------------------
// Polytope exports

json write_polytope_outputs(const fs::path& dir, const PolytopeRun& run, std::size_t n, std::uint64_t seed,
                            bool points) {
  prepare_dir(dir);
  if (points) {
    std::ostringstream os;
    os << kCsvSchemaLine << "\nlmin_a,lmin_b,lmin_c,i6,pyramid\n";
    for (const PolytopeSample& s : run.samples) {
      os << num(s.point.lmin[0]) << ',' << num(s.point.lmin[1]) << ',' << num(s.point.lmin[2]) << ','
         << num(s.i6) << ',' << (s.pyramid ? 1 : 0) << "\n";
    }
    write_file(dir / "points.csv", os.str());
  }

  const DensityGrid& g = run.grid;
  const std::size_t res = g.resolution();
  {
    std::ostringstream os;
    os << kCsvSchemaLine << "\nix,iy,iz,count\n";
    for (std::size_t ix = 0; ix < res; ++ix) {
      for (std::size_t iy = 0; iy < res; ++iy) {
        for (std::size_t iz = 0; iz < res; ++iz) {
          const auto c = g.counts()[(ix * res + iy) * res + iz];
          if (c != 0) os << ix << ',' << iy << ',' << iz << ',' << c << "\n";
        }
      }
    }
    write_file(dir / "grid.csv", os.str());
  }
  {
    // Flat little-endian uint64 counts, index (ix * res + iy) * res + iz.
    std::string bytes;
    bytes.reserve(g.counts().size() * 8);
    for (std::uint64_t c : g.counts()) {
      for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<char>((c >> (8 * b)) & 0xff));
    }
    write_file(dir / "grid.bin", bytes);
  }
  {
    std::ostringstream os;
    os << kCsvSchemaLine << "\nix,iy,iz,u,v,density\n";
    for (const SliceCell& c : sep_c_ghz_slice(g)) {
      os << c.ix << ',' << c.iy << ',' << c.iz << ',' << num(c.u) << ',' << num(c.v) << ','
         << num(c.density) << "\n";
    }
    write_file(dir / "slice.csv", os.str());
  }

  const double fraction = static_cast<double>(run.pyramid_count) / static_cast<double>(n);
  json summary{{"schema", "triq-lab/polytope/v1"},
               {"n", n},
               {"seed", seed},
               {"resolution", res},
               {"pyramid_count", run.pyramid_count},
               {"pyramid_fraction", fraction},
               {"pyramid_fraction_expected", kPyramidFraction},
               {"polygon_violations", run.polygon_violations},
               {"grid_layout", "uint64 little-endian, index (ix*res+iy)*res+iz, cell width 0.5/res"}};
  write_file(dir / "summary.json", dump(summary));
  return summary;
}

// ---------------------------------------------------------------------------

struct Context {
  Context(std::ostream& o, std::ostream& e) : out(o), err(e) {}

  std::ostream& out;
  std::ostream& err;
  RunConfig cfg;
  std::string seed_text;
  std::string input = "-";
  std::string q_text = "1";
  std::string class_text;
  std::string target;
  std::size_t restarts = 20;
  std::size_t bins = 200;
  std::size_t scatter = kScatterDefault;
  bool stream = false;
  bool check = false;
  bool points = true;
  bool n_given = false;
  bool bins_given = false;

  void resolve_seed_now() {
    try {
      cfg.seed = resolve_seed(seed_text, cfg.seed_source);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (cfg.seed_source == SeedSource::Random) err << "seed: " << cfg.seed << "\n";
  }

  EnsembleOptions ensemble_options() const {
    EnsembleOptions opt;
    opt.n = cfg.n;
    opt.seed = cfg.seed;
    opt.workers = cfg.workers;
    opt.bins = bins;
    return opt;
  }

  json run_header(std::string_view schema) const {
    return json{{"schema", schema},
                {"n", cfg.n},
                {"seed", cfg.seed},
                {"seed_source", seed_source_name(cfg.seed_source)}};
  }
};

PureState3Q read_input(const Context& ctx) { return validate_state_file(ctx.input); }

void cmd_sample(Context& ctx) {
  ctx.resolve_seed_now();
  const std::size_t n = ctx.cfg.n;
  std::ostringstream os;
  json states = json::array();
  if (ctx.cfg.format == "csv") os << kCsvSchemaLine << "\n" << state_csv_header() << "\n";
  for (std::size_t begin = 0, b = 0; begin < n; begin += kDefaultBlockSize, ++b) {
    Rng rng(RngSeed{ctx.cfg.seed}, b);
    const std::size_t count = std::min(kDefaultBlockSize, n - begin);
    for (std::size_t i = 0; i < count; ++i) {
      const PureState3Q s = sample_haar_state(rng);
      if (ctx.cfg.format == "csv") {
        os << state_csv_row(s) << "\n";
      } else {
        states.push_back(state_json(s));
      }
    }
  }
  if (ctx.cfg.format == "csv") {
    emit(ctx.cfg, ctx.out, os.str());
  } else {
    json doc = ctx.run_header("triq-lab/states/v1");
    doc["states"] = std::move(states);
    emit(ctx.cfg, ctx.out, dump(doc));
  }
}

void cmd_decompose(Context& ctx) {
  const AcinForm f = acin_decompose(read_input(ctx));
  if (ctx.cfg.format == "csv") {
    std::ostringstream os;
    os << kCsvSchemaLine << "\nlambda0,lambda1,lambda2,lambda3,lambda4,phi,degenerate\n";
    for (double l : f.lambda) os << num(l) << ',';
    os << num(f.phi) << ',' << (f.degenerate ? 1 : 0) << "\n";
    emit(ctx.cfg, ctx.out, os.str());
    return;
  }
  json doc{{"schema", "triq-lab/acin/v1"},
           {"lambda", f.lambda},
           {"phi", f.phi},
           {"degenerate", f.degenerate},
           {"reflected", f.reflected}};
  emit(ctx.cfg, ctx.out, dump(doc));
}

void cmd_invariants(Context& ctx) {
  const PureState3Q s = read_input(ctx);
  const InvariantSetI i = invariants_i(s);
  const InvariantSetJ j = j_from_acin(acin_decompose(s));
  if (ctx.cfg.format == "csv") {
    std::ostringstream os;
    os << kCsvSchemaLine << "\ni2,i3,i4,i5ppp,i6,kempe,j1,j2,j3,j4,j5\n";
    for (double v : {i.i2, i.i3, i.i4, i.i5ppp, i.i6, i.kempe, j.j1, j.j2, j.j3, j.j4}) os << num(v) << ',';
    os << num(j.j5) << "\n";
    emit(ctx.cfg, ctx.out, os.str());
    return;
  }
  json doc{{"schema", "triq-lab/invariants/v1"}};
  doc.update(i_json(i));
  doc.update(j_json(j));
  emit(ctx.cfg, ctx.out, dump(doc));
}

void cmd_classify(Context& ctx) {
  if (!(ctx.cfg.tol >= 0.0)) throw UsageError("--tol must be nonnegative");
  const PureState3Q s = read_input(ctx);
  const InvariantSetJ j = j_from_acin(acin_decompose(s));
  json doc{{"schema", "triq-lab/class/v1"},
           {"class", class_name(classify(j, ctx.cfg.tol))},
           {"slocc", slocc_name(slocc_label(s, ctx.cfg.tol))},
           {"j", j_json(j)}};
  emit(ctx.cfg, ctx.out, dump(doc));
}

OptimizerConfig optimizer_config(const Context& ctx) {
  if (ctx.restarts < 1) throw UsageError("--restarts must be at least 1");
  OptimizerConfig cfg;
  cfg.restarts = ctx.restarts;
  cfg.seed = ctx.cfg.seed;
  return cfg;
}

void cmd_riu(Context& ctx) {
  const double q = parse_q(ctx.q_text);
  ctx.resolve_seed_now();
  const PureState3Q s = read_input(ctx);
  const RiuResult r = riu_entropy(s, q, optimizer_config(ctx));
  json doc{{"schema", "triq-lab/riu/v1"},
           {"q", std::isinf(q) ? json("inf") : json(q)},
           {"restarts", ctx.restarts},
           {"seed", ctx.cfg.seed},
           {"entropy", r.entropy},
           {"argmin", angles_json(r.argmin)},
           {"prob_vector", r.prob_vector},
           {"iterations", r.iterations},
           {"converged", r.converged}};
  emit(ctx.cfg, ctx.out, dump(doc));
}

void cmd_overlap(Context& ctx) {
  const ClassId id = parse_class(ctx.class_text);
  ctx.resolve_seed_now();
  const PureState3Q s = read_input(ctx);
  const OverlapResult r = max_overlap(s, id, optimizer_config(ctx));
  const HdetTrack h = hdet_track(s, r);
  json theta = json::array();
  for (int k = 0; k < angle_count(id); ++k) theta.push_back(r.arg_class_params.theta[static_cast<std::size_t>(k)]);
  json doc{{"schema", "triq-lab/overlap/v1"},
           {"class", class_name(id)},
           {"restarts", ctx.restarts},
           {"seed", ctx.cfg.seed},
           {"lambda_max", r.lambda_max},
           {"class_params", {{"theta", theta}, {"phi", r.arg_class_params.phi}}},
           {"unitary", angles_json(r.arg_unitary)},
           {"representative", state_json(r.representative)},
           {"hdet_state", h.hdet_beta},
           {"hdet_representative", h.hdet_phi},
           {"iterations", r.iterations},
           {"converged", r.converged}};
  emit(ctx.cfg, ctx.out, dump(doc));
}

fs::path out_dir(const Context& ctx, std::string_view fallback) {
  return ctx.cfg.out.empty() ? fs::path(fallback) : ctx.cfg.out;
}

void cmd_polytope(Context& ctx) {
  ctx.resolve_seed_now();
  const PolytopeRun run = density_grid(ctx.cfg.n, ctx.bins, ctx.cfg.seed, ctx.cfg.workers, ctx.points);
  const json summary = write_polytope_outputs(out_dir(ctx, "polytope_out"), run, ctx.cfg.n, ctx.cfg.seed, ctx.points);
  ctx.out << dump(summary);
}

void cmd_ensemble(Context& ctx) {
  ctx.resolve_seed_now();
  const EnsembleOptions opt = ctx.ensemble_options();
  if (ctx.stream) {
    std::ostream* target = &ctx.out;
    std::ofstream file;
    if (!ctx.cfg.out.empty() && ctx.cfg.out != "-") {
      file.open(ctx.cfg.out, std::ios::binary);
      if (!file) throw Error("cannot write " + ctx.cfg.out.string());
      target = &file;
    }
    std::ostream& os = *target;
    os << kCsvSchemaLine << "\n# seed " << opt.seed << "\nindex";
    for (const auto& info : quantity_table()) os << ',' << info.name;
    os << ",degenerate,pyramid\n";
    stream_ensemble(opt, [&](std::size_t i, const Measurement& m) {
      os << i;
      for (double v : m.values) os << ',' << num(v);
      os << ',' << (m.degenerate ? 1 : 0) << ',' << (m.pyramid ? 1 : 0) << "\n";
    });
    return;
  }
  const fs::path dir = out_dir(ctx, "ensemble_out");
  prepare_dir(dir);
  const EnsembleResult r = run_ensemble(opt);
  write_histograms(dir, r, all_quantities());
  bool all_pass = true;
  const json moments = moments_json(r, all_pass);
  write_file(dir / "moments.json", dump(moments));
  write_file(dir / "fits.json", dump(fits_json(r)));
  for (const auto& c : moments["checks"]) {
    ctx.out << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << " "
            << num(c["empirical"].get<double>()) << " (exact " << num(c["exact"].get<double>()) << ")\n";
  }
  if (ctx.check && !all_pass) throw CheckFailed("moment checks failed");
}

// ---------------------------------------------------------------------------
// Reproduction recipes. Defaults: 10^6 states for figures and fits, 10^5 for
// the moment table, scatter files limited to the first 10^4 states.

std::size_t recipe_default_n(const std::string& target) {
  return target == "table-moments" ? 100000 : 1000000;
}

void reproduce_ensemble_figure(Context& ctx, const fs::path& dir, const std::vector<Quantity>& hist,
                               const std::vector<Quantity>& scatter, json& summary) {
  EnsembleOptions opt = ctx.ensemble_options();
  opt.keep = {Quantity::Phi, Quantity::I2};
  const EnsembleResult r = run_ensemble(opt);
  write_histograms(dir, r, hist);
  if (!scatter.empty()) write_scatter(dir / "scatter.csv", opt, ctx.scatter, scatter);
  summary["ks_phi_uniform"] =
      ks_distance(r.samples[index_of(Quantity::Phi)], [](double x) { return analytic_cdf("phi", x); });
  summary["ks_i2"] = ks_distance(r.samples[index_of(Quantity::I2)], [](double x) { return analytic_cdf("ik", x); });
  summary["degenerate_count"] = r.degenerate_count;
  if (std::find(hist.begin(), hist.end(), Quantity::Lambda0) != hist.end()) {
    write_file(dir / "fits.json", dump(fits_json(r)));
  }
}

void cmd_reproduce(Context& ctx) {
  const std::string& t = ctx.target;
  if (!ctx.n_given) ctx.cfg.n = recipe_default_n(t);
  ctx.resolve_seed_now();
  const fs::path dir = out_dir(ctx, "reproduce_" + t);
  prepare_dir(dir);
  json summary = ctx.run_header("triq-lab/reproduce/v1");
  summary["recipe"] = t;

  using Q = Quantity;
  if (t == "fig1") {
    reproduce_ensemble_figure(ctx, dir, {Q::Lambda0, Q::Lambda1, Q::Lambda2, Q::Lambda3, Q::Lambda4, Q::Phi}, {},
                              summary);
  } else if (t == "fig2") {
    reproduce_ensemble_figure(ctx, dir, {Q::I2, Q::I3, Q::I4, Q::I5ppp, Q::I6, Q::Kempe}, {Q::I2, Q::I5ppp, Q::I6},
                              summary);
  } else if (t == "fig3") {
    reproduce_ensemble_figure(ctx, dir, {Q::J1, Q::J2, Q::J3, Q::J4, Q::J5}, {Q::J1, Q::J4, Q::J5}, summary);
  } else if (t == "fig6") {
    const PolytopeRun run = density_grid(ctx.cfg.n, ctx.bins_given ? ctx.bins : kGridDefault, ctx.cfg.seed,
                                         ctx.cfg.workers, ctx.points);
    const json poly = write_polytope_outputs(dir / "polytope", run, ctx.cfg.n, ctx.cfg.seed, ctx.points);
    summary["pyramid_fraction"] = poly["pyramid_fraction"];
    summary["pyramid_fraction_expected"] = kPyramidFraction;
    summary["polygon_violations"] = poly["polygon_violations"];
  } else if (t == "table1") {
    const EnsembleResult r = run_ensemble(ctx.ensemble_options());
    const json fits = fits_json(r);
    write_file(dir / "fits.json", dump(fits));
    std::ostringstream os;
    os << kCsvSchemaLine << "\ni,a_ref,b_ref,c_ref,a_moments,b_moments,c_moments,a_lsq,b_lsq,c_lsq\n";
    for (std::size_t k = 0; k < 5; ++k) {
      const json& e = fits["fits"]["lambda" + std::to_string(k)];
      os << k << ',' << num(kReferenceFits[k].a) << ',' << num(kReferenceFits[k].b) << ','
         << num(kReferenceFits[k].c);
      for (const char* method : {"moments", "least_squares"}) {
        for (const char* p : {"a", "b", "c"}) {
          os << ',' << (e[method].is_null() ? std::string("nan") : num(e[method][p].get<double>()));
        }
      }
      os << "\n";
    }
    write_file(dir / "table1.csv", os.str());
  } else if (t == "table-moments") {
    const EnsembleResult r = run_ensemble(ctx.ensemble_options());
    bool all_pass = true;
    write_file(dir / "moments.json", dump(moments_json(r, all_pass)));
    summary["all_pass"] = all_pass;
    write_file(dir / "summary.json", dump(summary));
    ctx.out << dump(summary);
    if (ctx.check && !all_pass) throw CheckFailed("moment checks failed");
    return;
  }
  write_file(dir / "summary.json", dump(summary));
  ctx.out << dump(summary);
}

}  // namespace

std::uint64_t resolve_seed(const std::string& flag_text, SeedSource& source) {
  auto parse = [](const std::string& text, const char* what) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      throw std::invalid_argument(std::string(what) + " must be an unsigned 64-bit integer, got '" + text + "'");
    }
    return v;
  };
  if (!flag_text.empty()) {
    source = SeedSource::Flag;
    return parse(flag_text, "--seed");
  }
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    source = SeedSource::Environment;
    return parse(env, kSeedEnv);
  }
  source = SeedSource::Random;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx(out, err);
  CLI::App app{"Three-qubit random state laboratory", "triq-lab"};
  app.require_subcommand(1);

  std::vector<std::pair<CLI::App*, std::function<void(Context&)>>> handlers;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", ctx.seed_text, "RNG seed (falls back to $TRIQ_LAB_SEED, then a random value)");
  };
  auto add_out = [&](CLI::App* sub, const std::string& help) { sub->add_option("--out", ctx.cfg.out, help); };
  auto add_n = [&](CLI::App* sub) {
    sub->add_option("--n", ctx.cfg.n, "number of states")->check(CLI::PositiveNumber);
  };
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", ctx.cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  };
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("state", ctx.input, "state file (JSON or CSV); '-' reads stdin");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", ctx.cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  };

  {
    auto* sub = app.add_subcommand("sample", "draw Haar-random states");
    add_n(sub);
    add_seed(sub);
    add_format(sub);
    add_out(sub, "output file (default stdout)");
    handlers.emplace_back(sub, cmd_sample);
  }
  {
    auto* sub = app.add_subcommand("decompose", "five-term canonical form of a state");
    add_input(sub);
    add_format(sub);
    add_out(sub, "output file (default stdout)");
    handlers.emplace_back(sub, cmd_decompose);
  }
  {
    auto* sub = app.add_subcommand("invariants", "local-unitary invariants of a state");
    add_input(sub);
    add_format(sub);
    add_out(sub, "output file (default stdout)");
    handlers.emplace_back(sub, cmd_invariants);
  }
  {
    auto* sub = app.add_subcommand("classify", "entanglement class of a state");
    add_input(sub);
    sub->add_option("--tol", ctx.cfg.tol, "tolerance of the class predicates");
    add_out(sub, "output file (default stdout)");
    handlers.emplace_back(sub, cmd_classify);
  }
  {
    auto* sub = app.add_subcommand("riu", "Renyi entropy minimized over local unitaries");
    add_input(sub);
    sub->add_option("--q", ctx.q_text, "Renyi order (number or 'inf')");
    sub->add_option("--restarts", ctx.restarts, "optimizer restarts");
    add_seed(sub);
    add_out(sub, "output file (default stdout)");
    handlers.emplace_back(sub, cmd_riu);
  }
  {
    auto* sub = app.add_subcommand("overlap", "maximum overlap with an entanglement class");
    add_input(sub);
    sub->add_option("--class", ctx.class_text, "class name (1, 2a, ..., 4d)")->required();
    sub->add_option("--restarts", ctx.restarts, "optimizer restarts");
    add_seed(sub);
    add_out(sub, "output file (default stdout)");
    handlers.emplace_back(sub, cmd_overlap);
  }
  {
    auto* sub = app.add_subcommand("polytope", "entanglement polytope sampling and density grid");
    add_n(sub);
    add_seed(sub);
    add_workers(sub);
    sub->add_option("--bins", ctx.bins, "grid resolution per axis (default 80)")->check(CLI::PositiveNumber);
    sub->add_flag("!--no-points", ctx.points, "skip the per-state points.csv");
    add_out(sub, "output directory (default polytope_out)");
    handlers.emplace_back(sub, cmd_polytope);
  }
  {
    auto* sub = app.add_subcommand("ensemble", "Monte Carlo histograms, moments and fits");
    add_n(sub);
    add_seed(sub);
    add_workers(sub);
    sub->add_option("--bins", ctx.bins, "histogram bins")->check(CLI::PositiveNumber);
    sub->add_flag("--stream", ctx.stream, "write one CSV row per state instead of aggregates");
    sub->add_flag("--check", ctx.check, "exit with status 2 if a moment check fails");
    add_out(sub, "output directory (default ensemble_out); with --stream, output file");
    handlers.emplace_back(sub, cmd_ensemble);
  }
  {
    auto* sub = app.add_subcommand("reproduce", "regenerate the dataset behind a figure or table");
    sub->add_option("target", ctx.target, "fig1, fig2, fig3, fig6, table1 or table-moments")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig6", "table1", "table-moments"}));
    sub->add_option("--n", ctx.cfg.n, "number of states (default 10^6, 10^5 for table-moments)")
        ->check(CLI::PositiveNumber);
    add_seed(sub);
    add_workers(sub);
    sub->add_option("--bins", ctx.bins, "histogram bins (grid resolution for fig6, default 80)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--scatter", ctx.scatter, "states in scatter exports")->check(CLI::PositiveNumber);
    sub->add_flag("!--no-points", ctx.points, "fig6: skip the per-state points.csv");
    sub->add_flag("--check", ctx.check, "table-moments: exit with status 2 if a check fails");
    add_out(sub, "output directory (default reproduce_<target>)");
    handlers.emplace_back(sub, cmd_reproduce);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (auto& [sub, handler] : handlers) {
    if (!sub->parsed()) continue;
    ctx.cfg.subcommand = sub->get_name();
    auto given = [sub = sub](const std::string& name) {
      const CLI::Option* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    ctx.n_given = given("--n");
    ctx.bins_given = given("--bins");
    if (!ctx.n_given && (ctx.cfg.subcommand == "polytope" || ctx.cfg.subcommand == "ensemble")) {
      ctx.cfg.n = 100000;
    }
    if (!ctx.bins_given && ctx.cfg.subcommand == "polytope") ctx.bins = kGridDefault;
    try {
      handler(ctx);
      return kExitOk;
    } catch (const UsageError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const ParseError& e) {
      err << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const NormError& e) {
      err << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const CheckFailed& e) {
      err << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitValidation;
    }
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace triq::cli
