// Command-line front end: one subcommand per experiment mode.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "percshape/percshape.hpp"

using namespace percshape;

namespace {

struct Options {
  std::optional<double> epsilon;
  std::optional<double> p;
  std::vector<double> lambdas{0.0};
  int n = 1000;
  int seeds = 10;
  std::uint64_t seed = 1;
  std::string out;
  std::string dump;
  std::string trace;
  double box_margin = 0.25;
  std::optional<double> bound_a;
  int threads = 1;
  bool inject_fault = false;
  bool check_domination = false;
  bool skip_exhaustive = false;

  double eps() const {
    if (epsilon) return *epsilon;
    if (p) return 1.0 - *p;
    return 0.1;
  }
};

/// Writes to --out when given, stdout otherwise.
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* sub, Options& o, bool multi_lambda = true) {
  auto* eps = sub->add_option("--epsilon", o.epsilon, "closed-edge probability (1 - p)")->check(CLI::Range(0.0, 1.0));
  auto* p = sub->add_option("--p", o.p, "open-edge probability")->check(CLI::Range(0.0, 1.0));
  eps->excludes(p);
  p->excludes(eps);
  if (multi_lambda)
    sub->add_option("--lambda", o.lambdas, "slope parameter(s) in [0,1]")->expected(1, -1);
  sub->add_option("--n", o.n, "horizontal distance / number of steps")->check(CLI::PositiveNumber);
  sub->add_option("--seeds", o.seeds, "number of replicas")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--out", o.out, "output path (default stdout)");
  sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
}

void emit(const Options& o, const std::vector<CsvRow>& rows) {
  Sink sink(o.out);
  write_csv(sink.stream(), rows);
}

void add_constant(std::vector<CsvRow>& rows, double lambda, double eps, int n, const std::string& label, double value,
                  const std::string& quantity) {
  rows.push_back({lambda, eps, n, label, value, std::nullopt, quantity});
}

int run_tasep_mode(const Options& o) {
  const double eps = o.eps();
  std::vector<CsvRow> rows;
  for (double l : o.lambdas) {
    const auto v = tasep_current_samples(eps, l, o.n, o.seeds, o.seed, o.threads);
    append_series(rows, l, eps, o.n, "current", v);
    add_constant(rows, l, eps, o.n, "limit", current_limit(1.0, eps * l, eps), "current");
  }
  if (!o.dump.empty()) {
    const int j = target_row(o.n, eps, o.lambdas.front());
    const Window w = tasep_window_for(o.n, std::abs(j));
    Rng rng = make_stream(o.seed, 0, Stream::tasep_updates);
    std::ofstream f(o.dump);
    io::write_trajectory(f, run_tasep(w.lo, w.hi, o.n, eps, rng));
  }
  emit(o, rows);
  return 0;
}

int run_lpp_mode(const Options& o) {
  const double eps = o.eps();
  std::vector<CsvRow> rows;
  for (double ratio : o.lambdas) {
    const auto v = lpp_samples(eps, ratio, o.n, o.seeds, o.seed, o.threads);
    append_series(rows, ratio, eps, o.n, "passage_time", v);
    add_constant(rows, ratio, eps, o.n, "limit", psi(1.0, ratio, eps), "passage_time");
  }
  // the coupling identity on every replica, up to 100 x 100
  const int max_a = std::min(o.n, 100);
  const auto bad = for_each_replica(o.seeds, o.threads, [&](std::uint64_t r) {
    Rng rng = make_stream(o.seed, r, Stream::lpp_weights);
    return coupling_violations(sample_covering_table(max_a, max_a, eps, rng), max_a).size();
  });
  int status = 0;
  for (std::size_t r = 0; r < bad.size(); ++r) {
    if (bad[r] != 0) {
      std::cerr << "coupling identity failed on replica " << r << " (" << bad[r] << " pairs)\n";
      status = 2;
    }
  }
  emit(o, rows);
  return status;
}

int run_cross_mode(const Options& o) {
  const double eps = o.eps();
  const auto v = cross_shape_samples(eps, o.lambdas, o.n, o.seeds, o.seed, o.threads);
  std::vector<CsvRow> rows;
  for (std::size_t k = 0; k < o.lambdas.size(); ++k) {
    append_series(rows, o.lambdas[k], eps, o.n, "cross_distance", v[k]);
    add_constant(rows, o.lambdas[k], eps, o.n, "limit", f_shape(o.lambdas[k], eps), "cross_distance");
  }
  if (!o.dump.empty()) {
    int h = 0;
    for (double l : o.lambdas) h = std::max(h, target_row(o.n, eps, l));
    const RowRange rr = compact_rows(o.n, h, eps);
    Rng rng = make_stream(o.seed, 0, Stream::cross_edges);
    std::ofstream f(o.dump);
    io::write_cross(f, sample_cross(o.n, rr.lo, rr.hi, eps, rng, 0));
  }
  emit(o, rows);
  return 0;
}

int run_percolation_mode(const Options& o) {
  const double eps = o.eps();
  const auto est = estimate_mu(eps, o.lambdas, o.n, o.seeds, o.seed, o.box_margin, o.bound_a, o.threads);
  std::vector<CsvRow> rows;
  int status = 0;
  for (const MuEstimate& e : est) {
    for (std::size_t r = 0; r < e.samples.size(); ++r)
      if (e.samples[r].accepted)
        rows.push_back({e.lambda, eps, o.n, std::to_string(r), static_cast<double>(e.samples[r].distance) / o.n,
                        std::nullopt, "chemical_distance"});
    rows.push_back({e.lambda, eps, o.n, "mean", e.mean, e.stderr_value, "chemical_distance"});
    add_constant(rows, e.lambda, eps, o.n, "acceptance", e.acceptance_rate(), "chemical_distance");
    add_constant(rows, e.lambda, eps, o.n, "lower_bound", e.lower_bound, "chemical_distance");
    add_constant(rows, e.lambda, eps, o.n, "first_order", e.first_order, "chemical_distance");
    if (e.upper_bound) add_constant(rows, e.lambda, eps, o.n, "upper_bound", *e.upper_bound, "chemical_distance");
    std::cerr << "lambda=" << e.lambda << " mean=" << e.mean << " stderr=" << e.stderr_value
              << " lower=" << e.lower_bound << (e.above_lower_bound() ? " (above)" : " (BELOW)");
    if (e.upper_bound) std::cerr << " upper=" << *e.upper_bound << (e.below_upper_bound() ? " (below)" : " (ABOVE)");
    std::cerr << '\n';
  }
  if (o.check_domination) {
    std::vector<Point> targets;
    for (double l : o.lambdas) targets.push_back({o.n, target_row(o.n, eps, l)});
    const auto dom = for_each_replica(o.seeds, o.threads, [&](std::uint64_t r) {
      return check_domination(eps, o.n, targets, o.box_margin, o.seed, r);
    });
    for (std::size_t r = 0; r < dom.size(); ++r) {
      if (dom[r].violations != 0) {
        std::cerr << "domination violated on replica " << r << " at " << dom[r].violations << " sites\n";
        status = 2;
      }
    }
  }
  if (!o.dump.empty()) {
    int h = 0;
    for (double l : o.lambdas) h = std::max(h, target_row(o.n, eps, l));
    Rng rng = make_stream(o.seed, 0, Stream::bond_edges);
    std::ofstream f(o.dump);
    io::write_bonds(f, sample_bonds(mu_box(o.n, h, o.box_margin), 1.0 - eps, rng, 0));
  }
  emit(o, rows);
  return status;
}

int run_geodesic_mode(const Options& o) {
  const double eps = o.eps();
  const double lambda = o.lambdas.front();
  const auto samples = for_each_replica(o.seeds, o.threads, [&](std::uint64_t r) {
    return run_geodesic_sample(eps, lambda, o.n, o.box_margin, o.seed, r);
  });
  std::unique_ptr<std::ofstream> trace;
  if (!o.trace.empty()) trace = std::make_unique<std::ofstream>(o.trace);
  std::vector<PathCounts> counts;
  std::vector<double> k, b, boundary, length;
  int status = 0;
  std::size_t eligible = 0, escaped = 0;
  for (const GeodesicSample& s : samples) {
    if (trace) io::write_trace(*trace, to_trace(s, eps, lambda, o.n));
    counts.push_back(s.counts);
    k.push_back(static_cast<double>(s.counts.k));
    b.push_back(static_cast<double>(s.counts.b));
    boundary.push_back(static_cast<double>(s.counts.boundary));
    if (!s.well_formed || !s.weight_matches || !s.diagonals_closed || !s.k_unbiased || !s.bad_subset_of_k) {
      std::cerr << "geodesic identity failed on replica " << s.replica << '\n';
      status = 2;
    }
    if (s.endpoints_in_giant) {
      ++eligible;
      if (s.bypass.status == BypassStatus::escaped) {
        ++escaped;
      } else if (!s.bypass_valid) {
        std::cerr << "bypass failed on replica " << s.replica << ": " << to_string(s.bypass.status) << '\n';
        status = 2;
      } else {
        length.push_back(static_cast<double>(s.bypass.length) / o.n);
      }
    }
  }
  std::vector<CsvRow> rows;
  append_series(rows, lambda, eps, o.n, "K", k);
  append_series(rows, lambda, eps, o.n, "B", b);
  append_series(rows, lambda, eps, o.n, "boundary", boundary);
  append_series(rows, lambda, eps, o.n, "bypass_length", length);
  const BoundSummary sum = bound_statistics(counts, eps);
  rows.push_back({lambda, eps, o.n, "mean", sum.b_minus_eps_k.mean(), sum.b_minus_eps_k.stderr_of_mean(), "B_minus_eps_K"});
  add_constant(rows, lambda, eps, o.n, "bound", 2.0 * o.n * eps, "K");
  add_constant(rows, lambda, eps, o.n, "escape_rate",
               eligible ? static_cast<double>(escaped) / static_cast<double>(eligible) : 0.0, "bypass_length");
  emit(o, rows);
  return status;
}

int run_shape_mode(const Options& o) {
  const double p = o.p ? *o.p : 1.0 - o.eps();
  const auto [ball, replica] = shape_scan_accepted(p, o.n, o.box_margin, o.seed);
  const ShapeCheck c = check_shape(ball);
  Sink sink(o.out);
  std::ostream& out = sink.stream();
  out << "kind,x,y\n";
  for (const Point& q : ball.boundary) out << "boundary," << q.x << ',' << q.y << '\n';
  for (std::size_t y = 0; y < ball.outer_x.size(); ++y)
    if (ball.outer_x[y] >= 0) out << "outer," << ball.outer_x[y] << ',' << y << '\n';
  for (const auto& [x, y] : ball.theory) {
    out << "theory,";
    io::detail::write_double(out, x);
    out << ',';
    io::detail::write_double(out, y);
    out << '\n';
  }
  std::cerr << "replica=" << replica << " axis_x=" << c.axis_x << " predicted=" << ball.r / f_shape(0.0, 1.0 - p)
            << " band_rows=" << c.band_rows << " axis_within=" << c.axis_within
            << " off_axis_strict=" << c.off_axis_strict << " min_gap=" << c.worst_off_axis_gap << '\n';
  return 0;
}

int run_verify_mode(const Options& o) {
  VerifyOptions v;
  v.epsilon = o.epsilon || o.p ? o.eps() : 0.2;
  v.n = o.n;
  v.seeds = o.seeds;
  v.master_seed = o.seed;
  v.box_margin = o.box_margin;
  v.inject_fault = o.inject_fault;
  v.exhaustive_law = !o.skip_exhaustive;
  const auto t0 = std::chrono::steady_clock::now();
  const VerifyReport rep = run_verify(v);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json j;
  j["epsilon"] = v.epsilon;
  j["n"] = v.n;
  j["seeds"] = v.seeds;
  j["master_seed"] = v.master_seed;
  j["inject_fault"] = v.inject_fault;
  j["seconds"] = secs;
  j["passed"] = rep.all_passed();
  for (const IdentityResult& r : rep.results) {
    nlohmann::json e{{"name", r.name}, {"checks", r.checks}, {"failures", r.failures}, {"passed", r.passed()}};
    e["first_failing_seed"] = r.first_failing_seed ? nlohmann::json(*r.first_failing_seed) : nlohmann::json(nullptr);
    j["identities"].push_back(e);
    if (!r.passed())
      std::cerr << "identity " << r.name << " failed"
                << (r.first_failing_seed ? " at seed " + std::to_string(*r.first_failing_seed) : std::string()) << '\n';
  }
  Sink sink(o.out);
  sink.stream() << j.dump(2) << '\n';
  return rep.all_passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo tools for first-passage shapes in supercritical bond percolation"};
  app.require_subcommand(1);
  Options o;

  auto* tasep = app.add_subcommand("tasep", "current of the discrete-time parallel exclusion process");
  add_common(tasep, o);
  tasep->add_option("--dump", o.dump, "write replica 0's trajectory");

  auto* lpp = app.add_subcommand("lpp", "geometric last-passage times; --lambda is the column/row ratio");
  add_common(lpp, o);

  auto* cross = app.add_subcommand("cross", "distances in the cross model");
  add_common(cross, o);
  cross->add_option("--dump", o.dump, "write replica 0's config");

  auto* perc = app.add_subcommand("percolation", "conditioned chemical distance in Z^2");
  add_common(perc, o);
  perc->add_option("--box-margin", o.box_margin, "box slack as a fraction of n")->check(CLI::NonNegativeNumber);
  perc->add_option("--bound-A", o.bound_a, "constant of the quadratic upper correction");
  perc->add_flag("--check-domination", o.check_domination, "compare with the coupled cross model on every replica");
  perc->add_option("--dump", o.dump, "write replica 0's bond config");

  auto* geo = app.add_subcommand("geodesic", "canonical geodesic, bad edges and bypass per replica");
  add_common(geo, o);
  geo->add_option("--box-margin", o.box_margin, "box slack as a fraction of n")->check(CLI::NonNegativeNumber);
  geo->add_option("--trace", o.trace, "write one trace line per replica");

  auto* shape = app.add_subcommand("shape", "ball boundary near the positive x-axis; --n is the radius");
  add_common(shape, o, false);
  shape->add_option("--box-margin", o.box_margin, "box slack as a fraction of the radius")->check(CLI::NonNegativeNumber);

  auto* verify = app.add_subcommand("verify", "exact-identity suite with a JSON report");
  add_common(verify, o, false);
  verify->add_option("--box-margin", o.box_margin, "box slack as a fraction of n")->check(CLI::NonNegativeNumber);
  verify->add_flag("--inject-fault", o.inject_fault, "flip one pinned edge before re-extraction");
  verify->add_flag("--skip-exhaustive", o.skip_exhaustive, "skip the exhaustive law comparison");

  CLI11_PARSE(app, argc, argv);

  try {
    for (double l : o.lambdas)
      if (l < 0.0) throw std::invalid_argument("--lambda must be nonnegative");
    if (*tasep) return run_tasep_mode(o);
    if (*lpp) return run_lpp_mode(o);
    if (*cross) return run_cross_mode(o);
    if (*perc) return run_percolation_mode(o);
    if (*geo) return run_geodesic_mode(o);
    if (*shape) return run_shape_mode(o);
    if (*verify) return run_verify_mode(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
