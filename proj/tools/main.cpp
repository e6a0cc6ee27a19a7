#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "kirchhoff/config.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/harness.hpp"
#include "kirchhoff/serialize.hpp"

namespace {

using kirchhoff::ExitCode;
using kirchhoff::PlanKind;

struct Invocation {
  std::string config;
  std::string out = "runs";
  std::optional<std::size_t> jobs;
  std::optional<std::uint64_t> seed;
};

int run(PlanKind expected, const Invocation& inv) {
  kirchhoff::ExperimentPlan plan;
  try {
    plan = kirchhoff::load_config(kirchhoff::read_text_file(inv.config));
    if (plan.kind != expected) {
      throw kirchhoff::ConfigError("kind: config describes a '" +
                                   std::string(kirchhoff::to_string(plan.kind)) +
                                   "' plan, expected '" + std::string(kirchhoff::to_string(expected)) +
                                   "'");
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return static_cast<int>(ExitCode::ConfigError);
  }
  if (inv.jobs) plan.jobs = *inv.jobs;
  if (inv.seed) plan.seed = *inv.seed;

  kirchhoff::ArtifactBundle bundle;
  try {
    bundle = kirchhoff::run_plan(plan, inv.out);
  } catch (const kirchhoff::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return static_cast<int>(ExitCode::ConfigError);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::SolverFailure);
  }

  for (const auto& r : bundle.runs) {
    std::printf("run %-24s %s t_stop=%g\n", r.label.c_str(),
                std::string(kirchhoff::to_string(r.status)).c_str(), r.t_stop);
    for (const auto& w : r.warnings) std::printf("  warning: %s\n", w.c_str());
  }
  for (const auto& c : bundle.checks) {
    std::printf("%-5s %-36s value=%.6g threshold=%.6g\n",
                std::string(kirchhoff::to_string(c.verdict)).c_str(), c.name.c_str(), c.value,
                c.threshold);
  }
  for (const auto& m : bundle.measurements)
    std::printf("      %-36s %.6g\n", m.name.c_str(), m.value);
  std::printf("bundle %s\n", bundle.directory.string().c_str());
  return static_cast<int>(bundle.exit_code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments on the dissipative Kirchhoff equation and its parabolic limit"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, PlanKind>> commands{
      {"simulate", PlanKind::Simulate},   {"limit", PlanKind::Limit},
      {"corrector", PlanKind::Corrector}, {"sweep", PlanKind::SweepEps},
      {"grid", PlanKind::RegimeGrid},     {"verify", PlanKind::Verify},
  };
  const std::vector<std::string> descriptions{
      "integrate the hyperbolic problem and record energies",
      "solve the parabolic limit by both routes and compare them",
      "tabulate the initial-layer corrector",
      "sweep eps and fit the order of the perturbation error",
      "classify the decay regime over a (gamma, p) lattice",
      "check fitted decay exponents against the predicted bounds",
  };

  Invocation inv;
  std::optional<PlanKind> chosen;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, descriptions[i]);
    sub->add_option("--config", inv.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", inv.out, "output root; bundles go in <out>/<kind>-<hash>");
    sub->add_option("--jobs", inv.jobs, "worker threads for independent runs")->check(CLI::PositiveNumber);
    sub->add_option("--seed", inv.seed, "seed for randomized fixtures");
    const PlanKind kind = commands[i].second;
    sub->callback([&chosen, kind] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::ConfigError);
  }
  return run(*chosen, inv);
}
