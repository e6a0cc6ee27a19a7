#include "kirchhoff/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <thread>

#include <json.hpp>

#include "kirchhoff/energies.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/serialize.hpp"
#include "kirchhoff/svg.hpp"

namespace kirchhoff {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolName = "kirchhoff_lab";
constexpr const char* kToolVersion = "0.1.0";

// splitmix64: portable, so instances do not depend on the standard library's distributions
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

 private:
  std::uint64_t state_;
};

template <class Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(std::max<std::size_t>(jobs, 1), count);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

class BundleWriter {
 public:
  explicit BundleWriter(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& contents) {
    write_text_file(dir_ / name, contents);
    files_.push_back({name, sha256_hex(contents), contents.size()});
  }
  std::vector<FileRecord> take_files() { return std::move(files_); }

 private:
  fs::path dir_;
  std::vector<FileRecord> files_;
};

struct Context {
  const ExperimentPlan& plan;
  BundleWriter& writer;
  ArtifactBundle& bundle;
  std::string config_json;
  ordered_json timings = ordered_json::object();
};

void record_run(ArtifactBundle& bundle, std::string label, const Trajectory& traj) {
  bundle.runs.push_back({std::move(label), traj.status, traj.t_stop, traj.warnings});
}

void add_check(ArtifactBundle& bundle, std::string name, bool pass, double value, double threshold,
               std::string detail = {}) {
  bundle.checks.push_back({std::move(name), pass ? Verdict::Pass : Verdict::Fail, value, threshold,
                           std::move(detail)});
}

std::vector<double> one_plus(std::span<const double> times) {
  std::vector<double> out(times.size());
  std::transform(times.begin(), times.end(), out.begin(), [](double t) { return 1.0 + t; });
  return out;
}

PlotSeries plot_channel(const EnergySeries& series, std::string_view name) {
  return {std::string(name), one_plus(series.times), series.channel(name)};
}

template <class Fn>
void timed(Context& ctx, const char* phase, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const auto stop = std::chrono::steady_clock::now();
  ctx.timings[phase] = std::chrono::duration<double, std::milli>(stop - start).count();
}

void run_simulate(Context& ctx) {
  const auto& plan = ctx.plan;
  const auto& spec = *plan.spectrum;
  const auto& nl = *plan.nonlinearity;
  const auto& dis = *plan.dissipation;
  const double eps = *plan.eps;
  auto& bundle = ctx.bundle;

  Trajectory traj;
  timed(ctx, "solve_hyperbolic",
        [&] { traj = solve_hyperbolic(spec, nl, dis, eps, plan.u0, plan.u1, plan.settings); });
  record_run(bundle, "hyperbolic", traj);
  ctx.writer.write("trajectory.csv", trajectory_csv(traj));

  const auto series = energy_suite(traj, spec, nl, eps, plan.analysis.ks);
  ctx.writer.write("energies.csv", energy_csv(series));
  const auto apriori = apriori_margin(traj, spec, nl, dis, eps);
  ctx.writer.write("apriori.csv", apriori_csv(apriori));
  bundle.measurements.push_back(
      {"apriori_regime_satisfied", satisfies_apriori_regime(apriori, eps) ? 1.0 : 0.0});
  const auto floor = hamiltonian_floor(traj, spec, nl, dis, eps);
  ctx.writer.write("hamiltonian_floor.csv", floor_csv(floor));

  const auto& h = series.channel("H_eps");
  const double slack = plan.analysis.monotone_slack;
  const double rise = hamiltonian_max_increase(h);
  add_check(bundle, "hamiltonian_monotone", rise <= slack, rise, slack,
            "max relative increase of H_eps between samples");
  const double h0 = h.front();
  if (dissipation_integrable(dis) && h0 > 0.0) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& f : floor) worst = std::min(worst, f.margin / h0);
    add_check(bundle, "hamiltonian_floor", worst >= -slack, worst, -slack,
              "min (H - floor) / H(0)");
    const double e_min = min_phase_energy(traj, spec);
    add_check(bundle, "hyperbolic_nondecay", e_min > 0.0, e_min, 0.0,
              "min |u'|^2 + |A^{1/2}u|^2 over samples");
  }
  if (traj.size() >= 3)
    bundle.measurements.push_back({"residual_norm", residual_norm(traj, spec, nl, dis, eps)});

  const std::vector<PlotSeries> plots{plot_channel(series, "H_eps"), plot_channel(series, "E_half"),
                                      plot_channel(series, "E_one"), plot_channel(series, "V")};
  ctx.writer.write("energies.svg",
                   line_chart_svg(plots, {"hyperbolic energies", "1+t", "value", true, true}));
}

void run_limit(Context& ctx) {
  const auto& plan = ctx.plan;
  const auto& spec = *plan.spectrum;
  const auto& nl = *plan.nonlinearity;
  const auto& dis = *plan.dissipation;
  auto& bundle = ctx.bundle;
  const auto times = make_grid(plan.settings.grid);

  Trajectory reparam, direct;
  timed(ctx, "solve_parabolic_reparam",
        [&] { reparam = solve_parabolic_reparam(spec, nl, dis, plan.u0, plan.settings, times); });
  timed(ctx, "solve_parabolic_direct",
        [&] { direct = solve_parabolic_direct(spec, nl, dis, plan.u0, plan.settings, times); });
  record_run(bundle, "parabolic_reparam", reparam);
  record_run(bundle, "parabolic_direct", direct);
  ctx.writer.write("parabolic_reparam.csv", trajectory_csv(reparam));
  ctx.writer.write("parabolic_direct.csv", trajectory_csv(direct));

  const auto series = energy_suite(reparam, spec, nl, 0.0, plan.analysis.ks);
  ctx.writer.write("energies.csv", energy_csv(series));

  if (reparam.completed() && direct.completed()) {
    const double dev = trajectory_deviation(reparam, direct, plan.u0);
    add_check(bundle, "oracle_equivalence", dev <= plan.analysis.oracle_tol, dev,
              plan.analysis.oracle_tol, "sup |u_reparam - u_direct| / |u0|");
    bundle.measurements.push_back({"residual_norm_reparam", residual_norm(reparam, spec, nl, dis, 0.0)});
  }

  if (plan.analysis.random_instances > 0) {
    const auto instances = random_parabolic_instances(plan.seed, plan.analysis.random_instances);
    std::vector<double> deviations(instances.size());
    timed(ctx, "random_instances", [&] {
      parallel_for(instances.size(), plan.jobs, [&](std::size_t i) {
        const auto& inst = instances[i];
        const auto a = solve_parabolic_reparam(inst.spectrum, inst.nonlinearity, inst.dissipation,
                                               inst.u0, plan.settings, times);
        const auto b = solve_parabolic_direct(inst.spectrum, inst.nonlinearity, inst.dissipation,
                                              inst.u0, plan.settings, times);
        deviations[i] = (a.completed() && b.completed())
                            ? trajectory_deviation(a, b, inst.u0)
                            : std::numeric_limits<double>::infinity();
      });
    });
    std::string csv = "index,n,gamma,p,deviation\n";
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const auto& inst = instances[i];
      csv += std::to_string(i) + "," + std::to_string(inst.spectrum.size()) + "," +
             format_number(std::get<PowerNonlinearity>(inst.nonlinearity).gamma) + "," +
             format_number(dissipation_exponent(inst.dissipation)) + "," +
             format_number(deviations[i]) + "\n";
    }
    ctx.writer.write("random_instances.csv", csv);
    const double worst = *std::max_element(deviations.begin(), deviations.end());
    add_check(bundle, "oracle_equivalence_random", worst <= plan.analysis.oracle_tol, worst,
              plan.analysis.oracle_tol, "worst deviation over randomized instances");
  }

  const std::vector<PlotSeries> plots{plot_channel(series, "E_half"), plot_channel(series, "E_one"),
                                      plot_channel(series, "V")};
  ctx.writer.write("energies.svg",
                   line_chart_svg(plots, {"parabolic energies", "1+t", "value", true, true}));
}

struct SweepRun {
  Trajectory hyperbolic;
  CorrectorTrajectory corrector;
  std::optional<ErrorSeries> errors;
};

void run_sweep(Context& ctx) {
  const auto& plan = ctx.plan;
  const auto& spec = *plan.spectrum;
  const auto& nl = *plan.nonlinearity;
  const auto& dis = *plan.dissipation;
  auto& bundle = ctx.bundle;
  const auto times = make_grid(plan.settings.grid);
  const double p = dissipation_exponent(dis);

  Trajectory par;
  timed(ctx, "solve_parabolic", [&] {
    par = solve_parabolic_reparam(spec, nl, dis, plan.u0, plan.settings, times);
  });
  record_run(bundle, "parabolic", par);
  ctx.writer.write("parabolic.csv", trajectory_csv(par));

  std::vector<SweepRun> runs(plan.eps_list.size());
  timed(ctx, "solve_hyperbolic_sweep", [&] {
    parallel_for(runs.size(), plan.jobs, [&](std::size_t i) {
      const double eps = plan.eps_list[i];
      auto& run = runs[i];
      run.hyperbolic = solve_hyperbolic(spec, nl, dis, eps, plan.u0, plan.u1, plan.settings, times);
      run.corrector = corrector(spec, nl, dis, eps, plan.u0, plan.u1, times);
      if (run.hyperbolic.completed() && par.completed())
        run.errors = perturbation_errors(spec, run.hyperbolic, par, run.corrector, dis);
    });
  });

  bool all_completed = par.completed();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string tag = "eps" + std::to_string(i);
    record_run(bundle, "hyperbolic_" + tag, runs[i].hyperbolic);
    ctx.writer.write("trajectory_" + tag + ".csv", trajectory_csv(runs[i].hyperbolic));
    ctx.writer.write("corrector_" + tag + ".csv", corrector_csv(runs[i].corrector));
    if (runs[i].errors) ctx.writer.write("errors_" + tag + ".csv", error_csv(*runs[i].errors));
    all_completed = all_completed && runs[i].errors.has_value();
  }
  if (!all_completed) return;

  struct Channel {
    const char* name;
    std::vector<double> ErrorSeries::*values;
    double expected;  // squared-norm order in eps
    bool enforced;
  };
  const double target = plan.analysis.order_target;
  const std::vector<Channel> channels{
      {"rho_sq", &ErrorSeries::rho_sq, target, true},
      {"rho_half_sq", &ErrorSeries::rho_half_sq, target, false},
      {"rho_one_sq", &ErrorSeries::rho_one_sq, target, false},
      {"rprime_sq", &ErrorSeries::rprime_sq, target, true},
      {"rprime_half_sq", &ErrorSeries::rprime_half_sq, target - 1.0, false},
  };

  std::string csv = "eps";
  for (const auto& c : channels) csv += std::string(",sup_") + c.name;
  csv += ",weighted_constant\n";
  std::vector<std::vector<double>> sups(channels.size(), std::vector<double>(runs.size()));
  std::vector<double> weighted(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& es = *runs[i].errors;
    const double eps = plan.eps_list[i];
    csv += format_number(eps);
    for (std::size_t c = 0; c < channels.size(); ++c) {
      sups[c][i] = sup_until(es.times, es.*(channels[c].values));
      csv += "," + format_number(sups[c][i]);
    }
    weighted[i] = sup_until(es.times, es.weighted_rho_half_sq) / (eps * eps);
    csv += "," + format_number(weighted[i]) + "\n";
  }
  ctx.writer.write("sweep.csv", csv);

  ordered_json report;
  report["config"] = ordered_json::parse(ctx.config_json);
  auto& entries = report["channels"] = ordered_json::array();
  std::vector<PlotSeries> plots;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const auto fit = fit_eps_order(plan.eps_list, sups[c]);
    ordered_json item;
    item["channel"] = channels[c].name;
    item["expected_order"] = channels[c].expected;
    item["fitted_order"] = fit ? ordered_json(fit->exponent) : ordered_json(nullptr);
    item["rms_residual"] = fit ? ordered_json(fit->rms_residual) : ordered_json(nullptr);
    const std::string name = std::string("eps_order_") + channels[c].name;
    if (!fit) {
      item["verdict"] = "skipped";
      if (channels[c].enforced)
        bundle.checks.push_back({name, Verdict::Skipped, 0.0, plan.analysis.order_tol, "zero sup"});
    } else if (channels[c].enforced) {
      const double dev = std::abs(fit->exponent - channels[c].expected);
      const bool pass = dev <= plan.analysis.order_tol;
      item["verdict"] = pass ? "pass" : "fail";
      add_check(bundle, name, pass, fit->exponent, channels[c].expected,
                "fitted order of sup_t over the eps list");
    } else {
      item["verdict"] = "recorded";
      bundle.measurements.push_back({name, fit->exponent});
    }
    entries.push_back(std::move(item));
    plots.push_back({channels[c].name, plan.eps_list, sups[c]});
  }

  const auto [lo, hi] = std::minmax_element(weighted.begin(), weighted.end());
  const double ratio = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  report["weighted_constant_ratio"] = ratio;
  const bool weighted_theory = nondegeneracy_constant(nl) > 0.0 && p <= 1.0;
  if (weighted_theory) {
    add_check(bundle, "weighted_decay_error_ratio", ratio <= plan.analysis.weighted_ratio_max, ratio,
              plan.analysis.weighted_ratio_max,
              "max/min over eps of sup (1+t)^{p+1}|A^{1/2}rho|^2 / eps^2");
  } else {
    bundle.measurements.push_back({"weighted_decay_error_ratio", ratio});
  }
  ctx.writer.write("eps_order.json", report.dump(2) + "\n");
  ctx.writer.write("sweep.svg",
                   line_chart_svg(plots, {"sup of error channels", "eps", "sup", true, true}));
}

void run_regime_grid(Context& ctx) {
  const auto& lattice = ctx.plan.lattice;
  std::vector<RegimeCell> cells;
  std::string csv = "gamma,p,p_gamma,regime\n";
  for (double g : lattice.gammas) {
    for (double p : lattice.ps) {
      const auto regime =
          classify_regime(PowerNonlinearity{g}, PowerLawDissipation{p}, lattice.coercive);
      cells.push_back({g, p, regime.tag});
      csv += format_number(g) + "," + format_number(p) + "," + format_number(p_gamma(g)) + "," +
             std::string(to_string(regime.tag)) + "\n";
    }
  }
  ctx.writer.write("regime_grid.csv", csv);
  ctx.writer.write("regime_grid.svg",
                   regime_map_svg(cells, lattice.coercive ? "regimes, coercive operator"
                                                          : "regimes, noncoercive operator"));
}

void run_verify(Context& ctx) {
  const auto& plan = ctx.plan;
  const auto& spec = *plan.spectrum;
  const auto& nl = *plan.nonlinearity;
  const auto& dis = *plan.dissipation;
  auto& bundle = ctx.bundle;
  const bool hyperbolic = plan.analysis.hyperbolic;
  const bool coercive = plan.coercive();

  Trajectory traj;
  timed(ctx, "solve", [&] {
    traj = hyperbolic ? solve_hyperbolic(spec, nl, dis, *plan.eps, plan.u0, plan.u1, plan.settings)
                      : solve_parabolic_reparam(spec, nl, dis, plan.u0, plan.settings);
  });
  record_run(bundle, hyperbolic ? "hyperbolic" : "parabolic", traj);
  ctx.writer.write("trajectory.csv", trajectory_csv(traj));
  if (!traj.completed()) return;

  const double eps = hyperbolic ? *plan.eps : 0.0;
  const auto series = energy_suite(traj, spec, nl, eps, plan.analysis.ks);
  ctx.writer.write("energies.csv", energy_csv(series));

  auto bounds = predicted_bounds(nl, dis, coercive, hyperbolic);
  if (!plan.analysis.check_lower.value_or(coercive)) {
    std::erase_if(bounds.entries, [](const BoundEntry& e) {
      return e.kind == BoundKind::PolyLower || e.kind == BoundKind::ExpLower;
    });
  }
  const auto report = verify_bounds(series, bounds, plan.analysis.tol_exponent, plan.analysis.window);
  ctx.writer.write("verification_report.json", report_json(report, ctx.config_json));
  for (const auto& e : report.entries) {
    bundle.checks.push_back({std::string(to_string(e.predicted.quantity)) + "_" +
                                 std::string(to_string(e.predicted.kind)),
                             e.verdict, e.fitted ? e.fitted->exponent : 0.0, e.predicted.exponent,
                             "margin " + format_number(e.margin)});
  }
  bundle.measurements.push_back({"regime_bounds_skipped", bounds.skipped ? 1.0 : 0.0});

  const std::vector<PlotSeries> plots{plot_channel(series, "E_half"), plot_channel(series, "E_one"),
                                      plot_channel(series, "V")};
  ctx.writer.write("decay.svg", line_chart_svg(plots, {"decay", "1+t", "value", true, true}));
}

void run_corrector(Context& ctx) {
  const auto& plan = ctx.plan;
  const auto times = make_grid(plan.settings.grid);
  const auto corr = corrector(*plan.spectrum, *plan.nonlinearity, *plan.dissipation, *plan.eps,
                              plan.u0, plan.u1, times);
  ctx.writer.write("corrector.csv", corrector_csv(corr));
  std::vector<double> speed(corr.times.size());
  for (std::size_t i = 0; i < speed.size(); ++i)
    speed[i] = std::sqrt(sobolev_norm_sq(*plan.spectrum, corr.theta_prime[i], 0.0));
  const std::vector<PlotSeries> plots{{"|theta'|", one_plus(corr.times), speed}};
  ctx.writer.write("corrector.svg",
                   line_chart_svg(plots, {"corrector velocity", "1+t", "|theta'|", true, true}));
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ExitCode exit_code_for(const ArtifactBundle& bundle) {
  for (const auto& run : bundle.runs)
    if (run.status != SolveStatus::Completed) return ExitCode::SolverFailure;
  for (const auto& check : bundle.checks)
    if (check.verdict == Verdict::Fail) return ExitCode::VerificationFailed;
  return ExitCode::Ok;
}

}  // namespace

const CheckRecord* ArtifactBundle::check(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

const Measurement* ArtifactBundle::measurement(std::string_view name) const {
  for (const auto& m : measurements)
    if (m.name == name) return &m;
  return nullptr;
}

std::string bundle_name(const ExperimentPlan& plan) {
  return std::string(to_string(plan.kind)) + "-" + sha256_hex(canonical_json(plan)).substr(0, 12);
}

ArtifactBundle run_plan(const ExperimentPlan& plan, const fs::path& out_root) {
  ArtifactBundle bundle;
  const std::string config = canonical_json(plan);
  bundle.config_hash = sha256_hex(config);
  bundle.directory = out_root / bundle_name(plan);
  fs::create_directories(out_root);
  fs::remove_all(bundle.directory);
  fs::create_directories(bundle.directory);

  BundleWriter writer(bundle.directory);
  Context ctx{plan, writer, bundle, config};
  const auto started = std::chrono::steady_clock::now();
  switch (plan.kind) {
    case PlanKind::Simulate:
      run_simulate(ctx);
      break;
    case PlanKind::Limit:
      run_limit(ctx);
      break;
    case PlanKind::SweepEps:
      run_sweep(ctx);
      break;
    case PlanKind::RegimeGrid:
      run_regime_grid(ctx);
      break;
    case PlanKind::Verify:
      run_verify(ctx);
      break;
    case PlanKind::Corrector:
      run_corrector(ctx);
      break;
  }
  ctx.timings["total"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  bundle.files = writer.take_files();
  bundle.exit_code = exit_code_for(bundle);

  ordered_json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kToolVersion;
  manifest["kind"] = std::string(to_string(plan.kind));
  manifest["config_hash"] = bundle.config_hash;
  manifest["plan"] = ordered_json::parse(config);
  auto& runs = manifest["runs"] = ordered_json::array();
  for (const auto& r : bundle.runs)
    runs.push_back({{"label", r.label},
                    {"status", std::string(to_string(r.status))},
                    {"t_stop", r.t_stop},
                    {"warnings", r.warnings}});
  auto& checks = manifest["checks"] = ordered_json::array();
  for (const auto& c : bundle.checks)
    checks.push_back({{"name", c.name},
                      {"verdict", std::string(to_string(c.verdict))},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"detail", c.detail}});
  auto& measurements = manifest["measurements"] = ordered_json::array();
  for (const auto& m : bundle.measurements)
    measurements.push_back({{"name", m.name}, {"value", m.value}});
  manifest["exit_code"] = static_cast<int>(bundle.exit_code);
  auto& files = manifest["files"] = ordered_json::array();
  for (const auto& f : bundle.files)
    files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  manifest["execution"] = {{"jobs", plan.jobs}, {"timings_ms", ctx.timings},
                           {"created_at", utc_timestamp()}};
  write_text_file(bundle.directory / "manifest.json", manifest.dump(2) + "\n");
  return bundle;
}

std::vector<RandomInstance> random_parabolic_instances(std::uint64_t seed, std::size_t count) {
  SplitMix64 rng(seed);
  constexpr std::array<double, 3> gammas{0.5, 1.0, 2.0};
  constexpr std::array<double, 3> ps{0.0, 0.5, 1.0};
  std::vector<RandomInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 1 + rng.index(8);
    std::vector<double> lambda(n);
    for (auto& l : lambda) l = rng.uniform(0.1, 3.0);
    std::sort(lambda.begin(), lambda.end());
    ModalVector u0(n);
    for (std::size_t k = 0; k < n; ++k) u0[k] = rng.uniform(-1.0, 1.0);
    const double gamma = gammas[rng.index(gammas.size())];
    const double p = ps[rng.index(ps.size())];
    out.push_back({Spectrum(std::move(lambda)), PowerNonlinearity{gamma}, PowerLawDissipation{p},
                   std::move(u0)});
  }
  return out;
}

double trajectory_deviation(const Trajectory& a, const Trajectory& b, const ModalVector& u0) {
  const std::size_t count = std::min(a.size(), b.size());
  double norm = 0.0;
  for (double v : u0) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) norm = 1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (a.times[i] != b.times[i]) throw UsageError("trajectory_deviation: grids differ");
    for (std::size_t k = 0; k < a.u[i].size(); ++k)
      worst = std::max(worst, std::abs(a.u[i][k] - b.u[i][k]) / norm);
  }
  return worst;
}

}  // namespace kirchhoff
