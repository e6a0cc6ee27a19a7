#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kirchhoff/analysis.hpp"
#include "kirchhoff/config.hpp"
#include "kirchhoff/integrate.hpp"
#include "kirchhoff/model.hpp"

namespace kirchhoff {

/// Process exit codes of the command-line tool.
enum class ExitCode : int { Ok = 0, VerificationFailed = 1, SolverFailure = 2, ConfigError = 3 };

struct FileRecord {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// A pass/fail comparison of a measured value against a pinned threshold.
struct CheckRecord {
  std::string name;
  Verdict verdict = Verdict::Skipped;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// A reported value with no pass/fail attached.
struct Measurement {
  std::string name;
  double value = 0.0;
};

struct RunRecord {
  std::string label;
  SolveStatus status = SolveStatus::Completed;
  double t_stop = 0.0;
  std::vector<std::string> warnings;
};

struct ArtifactBundle {
  std::filesystem::path directory;
  std::string config_hash;
  std::vector<FileRecord> files;  // everything in `directory` except the manifest
  std::vector<CheckRecord> checks;
  std::vector<Measurement> measurements;
  std::vector<RunRecord> runs;
  ExitCode exit_code = ExitCode::Ok;

  const CheckRecord* check(std::string_view name) const;
  const Measurement* measurement(std::string_view name) const;
};

/// Directory name of a plan's bundle: <kind>-<first 12 hex digits of the config hash>.
std::string bundle_name(const ExperimentPlan& plan);

/// Executes the plan and writes its bundle under out_root/bundle_name(plan),
/// replacing a previous bundle of the same plan. manifest.json is written last.
ArtifactBundle run_plan(const ExperimentPlan& plan, const std::filesystem::path& out_root);

/// Deterministic pseudo-random instances for oracle-equivalence checks.
struct RandomInstance {
  Spectrum spectrum;
  Nonlinearity nonlinearity;
  Dissipation dissipation;
  ModalVector u0;
};

/// N <= 8, gamma in {0.5, 1, 2}, p in {0, 0.5, 1}; reproducible from the seed.
std::vector<RandomInstance> random_parabolic_instances(std::uint64_t seed, std::size_t count);

/// sup over shared samples of max_k |a_k - b_k| / |u0|.
double trajectory_deviation(const Trajectory& a, const Trajectory& b, const ModalVector& u0);

}  // namespace kirchhoff
