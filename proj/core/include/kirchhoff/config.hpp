#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kirchhoff/analysis.hpp"
#include "kirchhoff/integrate.hpp"
#include "kirchhoff/model.hpp"
#include "kirchhoff/spectral.hpp"

namespace kirchhoff {

enum class PlanKind { Simulate, Limit, SweepEps, RegimeGrid, Verify, Corrector };

std::string_view to_string(PlanKind kind);

struct AnalysisOptions {
  double tol_exponent = 0.07;
  std::optional<FitWindow> window;  // default: last two decades of (1+t)
  std::vector<double> ks{0.0, 1.0};
  std::optional<bool> coercive;     // default: coercivity(spectrum) > 0
  bool hyperbolic = false;          // verify against a hyperbolic run
  std::optional<bool> check_lower;  // default: the coercive flag
  double oracle_tol = 1e-6;
  std::size_t random_instances = 0;
  double order_target = 2.0;
  double order_tol = 0.3;
  double weighted_ratio_max = 10.0;
  double monotone_slack = 1e-8;
};

struct RegimeLattice {
  std::vector<double> gammas;
  std::vector<double> ps;
  bool coercive = false;
};

struct ExperimentPlan {
  PlanKind kind = PlanKind::Simulate;
  std::optional<Spectrum> spectrum;
  std::optional<Nonlinearity> nonlinearity;
  std::optional<Dissipation> dissipation;
  std::optional<double> eps;
  std::vector<double> eps_list;
  ModalVector u0;
  ModalVector u1;
  IntegratorSettings settings;
  AnalysisOptions analysis;
  RegimeLattice lattice;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;

  bool coercive() const;
};

/// Parses and validates a JSON configuration document, filling defaults.
/// Throws ConfigError naming the offending key.
ExperimentPlan load_config(std::string_view text);

/// Normalized JSON echo of the plan with every default spelled out. Excludes
/// `jobs`, which never changes results.
std::string canonical_json(const ExperimentPlan& plan);

}  // namespace kirchhoff
