#include "gencert/cli.hpp"

#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gencert/augment.hpp"
#include "gencert/bound_core.hpp"
#include "gencert/conclab.hpp"
#include "gencert/error.hpp"
#include "gencert/io.hpp"
#include "gencert/optimize.hpp"
#include "gencert/partition.hpp"
#include "gencert/synth.hpp"

namespace gencert::cli {
namespace {

using nlohmann::ordered_json;

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Writes to `path`, or to `out` when the path is empty.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty())
    out << content;
  else
    io::write_text(path, content);
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw Error(ErrorKind::parameter, std::string("malformed ") + what + ": '" + item + "'");
    v.push_back(d);
  }
  if (v.empty()) throw Error(ErrorKind::parameter, std::string("empty ") + what);
  return v;
}

std::string substitute(std::string s, const std::string& key, const std::string& value) {
  for (auto pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size()))
    s.replace(pos, key.size(), value);
  return s;
}

// Shared certificate flags.
struct BoundFlags {
  std::size_t K = 0;
  double delta = 0.01;
  double alpha = 100.0;
  double eps_gamma = 0.04;
  double gamma = 0.0;
  double c_sup = 1.0;
  bool zero_one = false;
  CLI::Option* gamma_opt = nullptr;

  void add(CLI::App* app, bool with_k = true) {
    if (with_k) app->add_option("--k", K, "Number of partition cells")->required();
    app->add_option("--delta", delta, "Failure mass of the loss estimate");
    app->add_option("--alpha", alpha, "Exponent alpha");
    auto* eps = app->add_option("--gamma-failure", eps_gamma, "Residual failure mass gamma^-alpha");
    gamma_opt = app->add_option("--gamma", gamma, "Raw gamma override");
    eps->excludes(gamma_opt);
    app->add_option("--c-sup", c_sup, "Supremum C of the loss");
    app->add_flag("--zero-one", zero_one, "Losses are 0-1; sets C = 1 and checks every loss");
  }

  BoundParams params(std::uint64_t n) const {
    const double c = zero_one ? 1.0 : c_sup;
    if (gamma_opt && gamma_opt->count() > 0) return BoundParams::from_gamma(n, K, delta, alpha, gamma, c);
    return BoundParams::from_eps_gamma(n, K, delta, alpha, eps_gamma, c);
  }

  void check_zero_one(const SampleTable& t, const char* what) const {
    if (!zero_one) return;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t.losses[i] != 0.0 && t.losses[i] != 1.0)
        throw Error(ErrorKind::invalid_input,
                    std::string(what) + " loss of '" + t.ids[i] + "' is not 0 or 1 under --zero-one");
  }
};

// ---------------------------------------------------------------------------

struct PartitionCmd {
  std::string features, out, centroids_in, centroids_out, report_out;
  std::string transformed_out, transformed_assignments_out;
  std::size_t K = 0;
  std::uint64_t seed = 0;
  std::size_t max_iters = kDefaultMaxIters;
  unsigned threads = 1;
  double transform_sigma = 0.0;
  std::uint64_t transform_seed = 0;
  CLI::Option* sigma_opt = nullptr;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("partition", "Fit k-means cells and assign samples");
    app->add_option("--features", features, "Features CSV (id,f1,...,fd)")->required();
    auto* k = app->add_option("--k", K, "Number of cells");
    auto* cin = app->add_option("--centroids-in", centroids_in, "Reuse centroids instead of fitting");
    k->excludes(cin);
    app->add_option("--seed", seed, "Clustering seed");
    app->add_option("--max-iters", max_iters, "Lloyd iteration cap");
    app->add_option("--threads", threads, "Worker threads (0 = all cores)");
    app->add_option("--out", out, "Assignments CSV (id,cell)")->required();
    app->add_option("--centroids-out", centroids_out, "Centroids JSON");
    app->add_option("--report-out", report_out, "Partition summary JSON");
    sigma_opt = app->add_option("--transform-sigma", transform_sigma, "Gaussian noise level for a transformed copy");
    app->add_option("--transform-seed", transform_seed, "Seed of the transformation");
    app->add_option("--transformed-out", transformed_out, "Transformed features CSV");
    app->add_option("--transformed-assignments-out", transformed_assignments_out,
                    "Assignments of the transformed features under the same centroids");
    app->callback([this] { run_partition(); });
  }

  std::ostream* out_stream = nullptr;

  void run_partition() {
    FeatureTable f = io::read_features(features);
    validate(f);
    Centroids c;
    if (!centroids_in.empty()) {
      // Reused centroids only assign; they are not refitted.
      c = io::parse_centroids(io::read_text(centroids_in));
    } else {
      if (K == 0) throw Error(ErrorKind::parameter, "--k or --centroids-in is required");
      c = fit(f, K, seed, max_iters, threads);
    }
    const Assignment a = assign(f, c, threads);
    io::write_text(out, io::assignments_csv(a));
    if (!centroids_out.empty()) io::write_text(centroids_out, io::centroids_json(c));
    const CellCounts cc = counts(a, c.K());

    ordered_json j;
    j["command"] = "partition";
    j["n"] = f.size();
    j["K"] = c.K();
    j["dim"] = c.dim;
    j["T_size"] = cc.t_size();
    j["sum_sq"] = compute_sum_sq(cc);
    j["iters_run"] = c.iters_run;
    j["objective_trace"] = c.objective_trace;
    j["counts"] = cc.counts;
    j["seeds"] = {{"partition", centroids_in.empty() ? seed : c.seed}};

    if (sigma_opt->count() > 0) {
      if (transformed_out.empty() && transformed_assignments_out.empty())
        throw Error(ErrorKind::parameter, "--transform-sigma needs --transformed-out or --transformed-assignments-out");
      const FeatureTable g = gaussian_transform(f, transform_sigma, transform_seed);
      if (!transformed_out.empty()) io::write_text(transformed_out, io::features_csv(g));
      if (!transformed_assignments_out.empty())
        io::write_text(transformed_assignments_out, io::assignments_csv(assign(g, c, threads)));
      j["transform"] = {{"sigma", transform_sigma}};
      j["seeds"]["transform"] = transform_seed;
    }
    const std::string text = dump(j);
    if (!report_out.empty()) io::write_text(report_out, text);
    *out_stream << text;
  }
};

struct CertifyCmd {
  std::string losses, assignments, out, masses;
  BoundFlags flags;
  double delta1 = 0.0, delta2 = 0.0;
  CLI::Option* masses_opt = nullptr;
  std::ostream* out_stream = nullptr;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("certify", "Certificate from losses and cell assignments");
    app->add_option("--losses", losses, "Losses CSV (id,loss)")->required();
    app->add_option("--assignments", assignments, "Assignments CSV (id,cell)")->required();
    flags.add(app);
    app->add_option("--out", out, "Report JSON (stdout when omitted)");
    masses_opt = app->add_option("--masses", masses, "Known cell masses CSV (cell,p)");
    app->add_option("--delta1", delta1, "Failure mass of the known-mass deviation term")->needs(masses_opt);
    app->add_option("--delta2", delta2, "Failure mass of the loss estimate")->needs(masses_opt);
    app->callback([this] { run_certify(); });
  }

  void run_certify() {
    const SampleTable t = io::read_losses(losses);
    validate(t);
    flags.check_zero_one(t, "training");
    const Assignment a = io::read_assignments(assignments);
    const auto cells = cells_for(t, a);
    const CellCounts cc = CellCounts::from_cells(cells, flags.K);
    const BoundParams p = flags.params(t.size());
    io::ReportContext ctx;
    ctx.command = "certify";
    ctx.inputs = {{"losses", losses}, {"assignments", assignments}};
    BoundReport r;
    if (masses_opt->count() > 0) {
      GeneralParams gp;
      gp.p = io::read_masses(masses, flags.K);
      gp.delta1 = delta1;
      gp.delta2 = delta2;
      r = certify_general(t.losses, cc, gp, p);
      ctx.inputs["masses"] = masses;
    } else {
      r = certify(t.losses, cc, p);
    }
    emit(out, io::report_json(r, ctx), *out_stream);
  }
};

struct CertifyAugCmd {
  std::string losses, assignments, aug_losses, aug_assignments, out, sigma_grid, sweep_out;
  BoundFlags flags;
  double sigma = 0.0;
  std::size_t pair_cap = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  CLI::Option* sigma_opt = nullptr;
  CLI::Option* grid_opt = nullptr;
  CLI::Option* cap_opt = nullptr;
  std::ostream* out_stream = nullptr;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("certify-aug", "Certificate from transformed samples");
    app->add_option("--losses", losses, "Original losses CSV")->required();
    app->add_option("--assignments", assignments, "Original assignments CSV")->required();
    app->add_option("--aug-losses", aug_losses, "Transformed losses CSV ({sigma} expands under --sigma-grid)")
        ->required();
    app->add_option("--aug-assignments", aug_assignments, "Transformed assignments CSV ({sigma} expands)")
        ->required();
    flags.add(app);
    sigma_opt = app->add_option("--sigma", sigma, "Noise level recorded in the report");
    grid_opt = app->add_option("--sigma-grid", sigma_grid, "Comma-separated noise levels, e.g. 0,0.05,0.1");
    sigma_opt->excludes(grid_opt);
    cap_opt = app->add_option("--pair-cap", pair_cap, "Subsample cells to this size (profiling only; voids the certificate)");
    app->add_option("--seed", seed, "Seed of the subsample");
    app->add_option("--threads", threads, "Worker threads (0 = all cores)");
    app->add_option("--out", out, "Report JSON ({sigma} expands under --sigma-grid)");
    app->add_option("--sweep-out", sweep_out, "Sweep summary CSV")->needs(grid_opt);
    app->callback([this] { run_aug(); });
  }

  BoundReport one(const SampleTable& t, const Assignment& a, const std::string& al, const std::string& aa,
                  std::optional<double> s) const {
    const SampleTable u = io::read_losses(al);
    flags.check_zero_one(u, "transformed");
    const Assignment ua = io::read_assignments(aa);
    PairStatsOptions po;
    if (cap_opt->count() > 0) po.cap_per_cell = pair_cap;
    po.seed = seed;
    po.threads = threads;
    BoundReport r = certify_aug(t, a, u, ua, flags.params(t.size()), po);
    r.augment->sigma = s;
    return r;
  }

  io::ReportContext context(const std::string& al, const std::string& aa) const {
    io::ReportContext ctx;
    ctx.command = "certify-aug";
    ctx.inputs = {{"losses", losses}, {"assignments", assignments}, {"aug_losses", al}, {"aug_assignments", aa}};
    if (cap_opt->count() > 0) ctx.seeds["pair_subsample"] = seed;
    return ctx;
  }

  void run_aug() {
    const SampleTable t = io::read_losses(losses);
    validate(t);
    flags.check_zero_one(t, "training");
    const Assignment a = io::read_assignments(assignments);
    if (grid_opt->count() == 0) {
      const auto s = sigma_opt->count() > 0 ? std::optional<double>(sigma) : std::nullopt;
      const BoundReport r = one(t, a, aug_losses, aug_assignments, s);
      emit(out, io::report_json(r, context(aug_losses, aug_assignments)), *out_stream);
      return;
    }
    if (out.find("{sigma}") == std::string::npos)
      throw Error(ErrorKind::parameter, "--out must contain {sigma} under --sigma-grid");
    std::string sweep = "sigma,eps_bar,aug_loss,correction,main_part,unc,bound,corrected\n";
    for (double s : parse_double_list(sigma_grid, "--sigma-grid")) {
      const std::string tag = io::format_double(s);
      const std::string al = substitute(aug_losses, "{sigma}", tag);
      const std::string aa = substitute(aug_assignments, "{sigma}", tag);
      const BoundReport r = one(t, a, al, aa, s);
      io::write_text(substitute(out, "{sigma}", tag), io::report_json(r, context(al, aa)));
      sweep += tag + "," + io::format_double(r.augment->eps_bar) + "," + io::format_double(r.augment->aug_loss) +
               "," + io::format_double(r.augment->correction) + "," + io::format_double(*r.main_part) + "," +
               io::format_double(r.terms.unc) + "," + io::format_double(r.bound) + "," +
               (r.corrected ? "true" : "false") + "\n";
    }
    emit(sweep_out, sweep, *out_stream);
  }
};

struct OptimizeCmd {
  std::string losses, features, out, grid_out, k_grid, alpha_grid, assignments_out;
  double delta = 0.01, eps_gamma = 0.04, c_sup = 1.0;
  std::uint64_t seed = 0;
  bool bonferroni = false, zero_one = false;
  std::size_t max_iters = kDefaultMaxIters;
  unsigned threads = 1;
  std::ostream* out_stream = nullptr;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("optimize", "Grid search over K and alpha");
    app->add_option("--losses", losses, "Losses CSV (id,loss)")->required();
    app->add_option("--features", features, "Features CSV (id,f1,...,fd)")->required();
    app->add_option("--k-grid", k_grid, "Comma-separated K values (default 100,...,10000)");
    app->add_option("--alpha-grid", alpha_grid, "Comma-separated alpha values (default 10,...,100)");
    app->add_option("--delta", delta, "Failure mass of the loss estimate");
    app->add_option("--gamma-failure", eps_gamma, "Residual failure mass gamma^-alpha");
    app->add_option("--c-sup", c_sup, "Supremum C of the loss");
    app->add_flag("--zero-one", zero_one, "Losses are 0-1; sets C = 1");
    app->add_option("--seed", seed, "Master clustering seed");
    app->add_flag("--bonferroni", bonferroni, "Split delta evenly over the grid");
    app->add_option("--max-iters", max_iters, "Lloyd iteration cap");
    app->add_option("--threads", threads, "Worker threads (0 = all cores)");
    app->add_option("--out", out, "Best report JSON (stdout when omitted)");
    app->add_option("--grid-out", grid_out, "Grid CSV (K,alpha,gamma,u_hat,g,unc,bound,valid)");
    app->add_option("--assignments-out", assignments_out, "Assignments of the best partition");
    app->callback([this] { run_optimize(); });
  }

  void run_optimize() {
    const SampleTable t = io::read_losses(losses);
    const FeatureTable f = io::read_features(features);
    validate(f);
    GridOptions o;
    if (k_grid.empty()) {
      o.k_grid = default_k_grid();
    } else {
      for (double k : parse_double_list(k_grid, "--k-grid")) {
        if (!(k >= 1.0) || k != std::floor(k)) throw Error(ErrorKind::parameter, "K values must be positive integers");
        o.k_grid.push_back(static_cast<std::size_t>(k));
      }
    }
    o.alpha_grid = alpha_grid.empty() ? default_alpha_grid() : parse_double_list(alpha_grid, "--alpha-grid");
    o.delta = delta;
    o.eps_gamma = eps_gamma;
    o.c_sup = zero_one ? 1.0 : c_sup;
    o.seed = seed;
    o.bonferroni = bonferroni;
    o.max_iters = max_iters;
    o.threads = threads;
    if (zero_one)
      for (double l : t.losses)
        if (l != 0.0 && l != 1.0) throw Error(ErrorKind::invalid_input, "a loss is not 0 or 1 under --zero-one");
    const GridResult g = grid_search(t, f, o);
    if (!grid_out.empty()) io::write_text(grid_out, io::grid_csv(g));
    if (!assignments_out.empty()) {
      const FeatureTable rows = select_rows(f, t.ids);
      const Centroids c = fit(rows, g.best.params.K, g.best_partition_seed, max_iters, threads);
      io::write_text(assignments_out, io::assignments_csv(assign(rows, c, threads)));
    }
    io::ReportContext ctx;
    ctx.command = "optimize";
    ctx.inputs = {{"losses", losses}, {"features", features}};
    ctx.seeds = {{"master", seed}, {"partition", g.best_partition_seed}};
    auto j = ordered_json::parse(io::report_json(g.best, ctx));
    j["grid"] = {{"k_grid", o.k_grid},        {"alpha_grid", o.alpha_grid}, {"bonferroni", g.bonferroni},
                 {"delta_used", g.delta_used}, {"rows", g.table.size()},     {"best_row", g.best_row}};
    emit(out, dump(j), *out_stream);
  }
};

struct VerifyCmd {
  std::string suite = "full", out, report_out;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::ostream* out_stream = nullptr;
  int* exit_code = nullptr;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("verify-concentration", "Check the concentration inequalities");
    app->add_option("--suite", suite, "exact, mc or full")->check(CLI::IsMember({"exact", "mc", "full"}));
    app->add_option("--trials", trials, "Monte-Carlo trials per configuration");
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--threads", threads, "Worker threads (0 = all cores)");
    app->add_option("--out", out, "Check report CSV (check,params,estimate,bound,margin,pass)");
    app->add_option("--report-out", report_out, "Summary JSON");
    app->callback([this] { run_verify(); });
  }

  void run_verify() {
    conclab::SuiteOptions so;
    so.suite = suite == "exact" ? conclab::Suite::exact
               : suite == "mc"  ? conclab::Suite::monte_carlo
                                : conclab::Suite::full;
    so.trials = trials;
    so.seed = seed;
    so.threads = threads;
    const auto rows = conclab::run_suite(so);
    if (!out.empty()) io::write_text(out, io::checks_csv(rows));
    std::size_t failed = 0, exact = 0;
    ordered_json failures = ordered_json::array();
    for (const auto& r : rows) {
      exact += r.exact ? 1 : 0;
      if (!r.pass) {
        ++failed;
        failures.push_back({{"check", r.check}, {"params", r.params}, {"estimate", r.estimate}, {"bound", r.bound}});
      }
    }
    ordered_json j;
    j["command"] = "verify-concentration";
    j["suite"] = suite;
    j["trials"] = trials;
    j["checks"] = rows.size();
    j["exact_checks"] = exact;
    j["monte_carlo_checks"] = rows.size() - exact;
    j["failed"] = failed;
    j["failures"] = failures;
    j["seeds"] = {{"master", seed}};
    const std::string text = dump(j);
    if (!report_out.empty()) io::write_text(report_out, text);
    *out_stream << text;
    *exit_code = failed == 0 ? kOk : kCheckFailed;
  }
};

struct SyntheticCmd {
  std::string spec, out, report_out;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  unsigned threads = 1;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  std::ostream* out_stream = nullptr;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("synthetic", "Coverage experiment on a synthetic mixture");
    app->add_option("--spec", spec, "Experiment file (key=value lines)")->required();
    seed_opt = app->add_option("--seed", seed, "Overrides the file's seed");
    trials_opt = app->add_option("--trials", trials, "Overrides the file's trial count");
    app->add_option("--threads", threads, "Worker threads (0 = all cores)");
    app->add_option("--out", out, "Per-trial CSV");
    app->add_option("--report-out", report_out, "Summary JSON");
    app->callback([this] { run_synthetic(); });
  }

  void run_synthetic() {
    synth::Experiment ex = synth::parse_experiment(io::read_text(spec));
    if (seed_opt->count() > 0) ex.options.seed = seed;
    if (trials_opt->count() > 0) ex.options.trials = trials;
    ex.options.threads = threads;
    const auto r = synth::coverage_run(ex.spec, ex.options);
    if (!out.empty()) io::write_text(out, io::coverage_csv(r));
    auto summary = [](const synth::CoverageSummary& s) {
      return ordered_json{{"coverage_fraction", s.coverage_fraction},
                          {"mean_bound", s.mean_bound},
                          {"mean_gap", s.mean_gap}};
    };
    const auto& o = ex.options;
    ordered_json j;
    j["command"] = "synthetic";
    j["truth"] = r.truth.value;
    j["truth_stderr"] = r.truth.stderr_;
    j["truth_analytic"] = r.truth.analytic;
    j["n"] = o.n;
    j["K"] = o.K;
    j["trials"] = o.trials;
    j["delta"] = o.delta;
    j["eps_gamma"] = o.eps_gamma;
    j["alpha"] = o.alpha;
    j["gamma"] = r.gamma;
    j["partition"] = o.partition == synth::PartitionKind::kmeans ? "kmeans" : "quantile";
    j["trained_threshold"] = o.trained_threshold;
    j["guarantee"] = r.guarantee;
    j["mean_sum_sq"] = r.mean_sum_sq;
    j["estimated_mass"] = summary(r.estimated_mass);
    if (r.known_mass) {
      j["known_mass"] = summary(*r.known_mass);
      j["known_mass"]["delta1"] = r.known_mass_delta1;
      j["known_mass"]["delta2"] = r.known_mass_delta2;
    }
    j["seeds"] = {{"master", o.seed}};
    j["inputs"] = {{"spec", spec}};
    const std::string text = dump(j);
    if (!report_out.empty()) io::write_text(report_out, text);
    *out_stream << text;
  }
};

void error_json(std::ostream& err, std::string_view kind, const std::string& message,
                std::optional<std::size_t> line) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  j["line"] = line ? ordered_json(*line) : ordered_json(nullptr);
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"gencert"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  int code = kOk;
  CLI::App app{"Partition-based generalization certificates"};
  app.require_subcommand(1);
  PartitionCmd partition;
  CertifyCmd certify_cmd;
  CertifyAugCmd aug;
  OptimizeCmd optimize;
  VerifyCmd verify;
  SyntheticCmd synthetic;
  partition.out_stream = certify_cmd.out_stream = aug.out_stream = optimize.out_stream = verify.out_stream =
      synthetic.out_stream = &out;
  verify.exit_code = &code;
  partition.add(app);
  certify_cmd.add(app);
  aug.add(app);
  optimize.add(app);
  verify.add(app);
  synthetic.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_json(err, "usage", e.what(), std::nullopt);
    return kInvalid;
  } catch (const Error& e) {
    error_json(err, to_string(e.kind()), e.what(), e.line());
    return kInvalid;
  } catch (const std::exception& e) {
    error_json(err, "internal", e.what(), std::nullopt);
    return kInvalid;
  }
  return code;
}

}  // namespace gencert::cli
