#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kirchhoff/model.hpp"
#include "kirchhoff/spectral.hpp"

namespace kirchhoff {

enum class GridKind { Log, Linear };

/// Output times. Log grids are geometric in (1+t) and start at t = 0.
struct OutputGrid {
  GridKind kind = GridKind::Log;
  std::size_t count = 400;
  double t_end = 1.0;
};

std::vector<double> make_grid(const OutputGrid& grid);

struct IntegratorSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Hyperbolic step cap h <= c * sqrt(eps / (lambda_max * m_ref + eps)).
  double max_step_factor = 0.5;
  /// Threshold on |u|^2 + |u'|^2.
  double blowup_threshold = 1e8;
  OutputGrid grid;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

enum class SolveStatus { Completed, BlewUp, StepUnderflow };

std::string_view to_string(SolveStatus status);

struct Trajectory {
  std::vector<double> times;
  std::vector<ModalVector> u;
  std::vector<ModalVector> uprime;
  SolveStatus status = SolveStatus::Completed;
  double t_stop = 0.0;  // equals times.back(); meaningful when status != Completed
  std::optional<std::vector<double>> alpha;  // reparametrized parabolic runs only
  std::vector<std::string> warnings;

  std::size_t size() const { return times.size(); }
  bool completed() const { return status == SolveStatus::Completed; }
};

struct CorrectorTrajectory {
  std::vector<double> times;
  std::vector<ModalVector> theta;
  std::vector<ModalVector> theta_prime;
};

/// eps u'' + b(t) u' + m(|A^{1/2}u|^2) A u = 0, u(0) = u0, u'(0) = u1.
Trajectory solve_hyperbolic(const Spectrum& spec, const Nonlinearity& nl, const Dissipation& dis,
                            double eps, const ModalVector& u0, const ModalVector& u1,
                            const IntegratorSettings& settings);

/// Same, on an explicit output time list (first entry is the initial time 0).
Trajectory solve_hyperbolic(const Spectrum& spec, const Nonlinearity& nl, const Dissipation& dis,
                            double eps, const ModalVector& u0, const ModalVector& u1,
                            const IntegratorSettings& settings, std::span<const double> times);

/// Parabolic limit b(t) u' + m(|A^{1/2}u|^2) A u = 0 through u(t) = v(alpha(t)),
/// where v is the heat semigroup applied to u0 and alpha solves a scalar ODE.
Trajectory solve_parabolic_reparam(const Spectrum& spec, const Nonlinearity& nl,
                                   const Dissipation& dis, const ModalVector& u0,
                                   const IntegratorSettings& settings);
Trajectory solve_parabolic_reparam(const Spectrum& spec, const Nonlinearity& nl,
                                   const Dissipation& dis, const ModalVector& u0,
                                   const IntegratorSettings& settings,
                                   std::span<const double> times);

/// Parabolic limit integrated directly as an N-dimensional first-order system.
Trajectory solve_parabolic_direct(const Spectrum& spec, const Nonlinearity& nl,
                                  const Dissipation& dis, const ModalVector& u0,
                                  const IntegratorSettings& settings);
Trajectory solve_parabolic_direct(const Spectrum& spec, const Nonlinearity& nl,
                                  const Dissipation& dis, const ModalVector& u0,
                                  const IntegratorSettings& settings,
                                  std::span<const double> times);

/// Boundary-layer corrector: eps theta'' + b theta' = 0, theta(0) = 0, theta'(0) = w0.
CorrectorTrajectory corrector(const Spectrum& spec, const Nonlinearity& nl, const Dissipation& dis,
                              double eps, const ModalVector& u0, const ModalVector& u1,
                              std::span<const double> times);

/// Scalar part of the corrector: int_0^t exp(-B(s)/eps) ds at each time.
std::vector<double> corrector_profile(const Dissipation& dis, double eps,
                                      std::span<const double> times, double abs_tol = 1e-12);

/// Maximum over interior samples of the equation defect (centered divided
/// differences on the sample grid) divided by 1 + |u| + |u'|. eps = 0 checks
/// the parabolic equation. Throws UsageError for fewer than 3 samples.
double residual_norm(const Trajectory& traj, const Spectrum& spec, const Nonlinearity& nl,
                     const Dissipation& dis, double eps);

}  // namespace kirchhoff
