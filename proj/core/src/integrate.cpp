#include "kirchhoff/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kirchhoff/errors.hpp"
#include "kirchhoff/ode.hpp"

namespace kirchhoff {

std::vector<double> make_grid(const OutputGrid& grid) {
  if (grid.count < 2) throw ConfigError("settings.grid.count: must be at least 2");
  if (!(grid.t_end > 0.0) || !std::isfinite(grid.t_end))
    throw ConfigError("settings.grid.t_end: must be positive and finite");
  std::vector<double> times(grid.count);
  const double last = static_cast<double>(grid.count - 1);
  if (grid.kind == GridKind::Linear) {
    for (std::size_t i = 0; i < grid.count; ++i)
      times[i] = grid.t_end * (static_cast<double>(i) / last);
  } else {
    const double log_span = std::log1p(grid.t_end);
    for (std::size_t i = 0; i < grid.count; ++i)
      times[i] = std::expm1(log_span * (static_cast<double>(i) / last));
  }
  times.front() = 0.0;
  times.back() = grid.t_end;
  return times;
}

void IntegratorSettings::validate() const {
  if (!(rel_tol > 0.0)) throw ConfigError("settings.rel_tol: must be positive");
  if (!(abs_tol > 0.0)) throw ConfigError("settings.abs_tol: must be positive");
  if (!(max_step_factor > 0.0)) throw ConfigError("settings.max_step_factor: must be positive");
  if (!(blowup_threshold > 0.0)) throw ConfigError("settings.blowup_threshold: must be positive");
  if (grid.count < 2) throw ConfigError("settings.grid.count: must be at least 2");
  if (!(grid.t_end > 0.0)) throw ConfigError("settings.grid.t_end: must be positive");
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Completed:
      return "completed";
    case SolveStatus::BlewUp:
      return "blew_up";
    case SolveStatus::StepUnderflow:
      return "step_underflow";
  }
  return "unknown";
}

namespace {

void check_times(std::span<const double> times) {
  if (times.size() < 2) throw UsageError("output times: at least two samples are required");
  if (times.front() != 0.0) throw UsageError("output times: must start at t = 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]) || !std::isfinite(times[i]))
      throw UsageError("output times: must be finite and strictly increasing");
}

void warn_if_really_degenerate(Trajectory& traj, const Nonlinearity& nl, double sigma0) {
  if (stiffness(nl, sigma0) == 0.0)
    traj.warnings.emplace_back(
        "m(|A^{1/2}u0|^2) = 0: really degenerate data, no theory applies");
}

DormandPrince45::Options ode_options(const IntegratorSettings& settings) {
  DormandPrince45::Options options;
  options.rel_tol = settings.rel_tol;
  options.abs_tol = settings.abs_tol;
  return options;
}

// Appends the state where the integrator stopped early, keeping times strictly increasing.
template <class Sample>
void append_stop_sample(Trajectory& traj, SolveStatus status, double t_stop, Sample&& sample) {
  traj.status = status;
  if (traj.times.empty() || t_stop > traj.times.back()) sample(t_stop);
  traj.t_stop = traj.times.back();
}

}  // namespace

Trajectory solve_hyperbolic(const Spectrum& spec, const Nonlinearity& nl, const Dissipation& dis,
                            double eps, const ModalVector& u0, const ModalVector& u1,
                            const IntegratorSettings& settings) {
  const auto times = make_grid(settings.grid);
  return solve_hyperbolic(spec, nl, dis, eps, u0, u1, settings, times);
}

Trajectory solve_hyperbolic(const Spectrum& spec, const Nonlinearity& nl, const Dissipation& dis,
                            double eps, const ModalVector& u0, const ModalVector& u1,
                            const IntegratorSettings& settings, std::span<const double> times) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("solve_hyperbolic: eps must be positive");
  require_matching(spec, u0, "u0");
  require_matching(spec, u1, "u1");
  settings.validate();
  check_times(times);

  const std::size_t n = spec.size();
  const auto lambda = spec.eigenvalues();
  Trajectory traj;
  const double sigma0 = sobolev_norm_sq(spec, u0, 0.5);
  warn_if_really_degenerate(traj, nl, sigma0);

  const double h0 = eps * sobolev_norm_sq(spec, u1, 0.0) + eval_nonlinearity(nl, sigma0).M;
  const double m_ref = stiffness_bound(nl, h0);
  auto options = ode_options(settings);
  options.max_step =
      settings.max_step_factor * std::sqrt(eps / (spec.largest() * m_ref + eps));

  // state y = (u_1..u_N, u'_1..u'_N)
  auto rhs = [&](double t, std::span<const double> y, std::span<double> dydt) {
    CompensatedSum sigma;
    for (std::size_t k = 0; k < n; ++k) sigma.add(lambda[k] * y[k] * y[k]);
    const double c = stiffness(nl, std::max(sigma.result(), 0.0));
    const double b = damping(dis, t);
    for (std::size_t k = 0; k < n; ++k) {
      dydt[k] = y[n + k];
      dydt[n + k] = -(b * y[n + k] + c * lambda[k] * y[k]) / eps;
    }
  };

  auto record = [&](double t, std::span<const double> y) {
    traj.times.push_back(t);
    traj.u.emplace_back(std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n)));
    traj.uprime.emplace_back(std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(n), y.end()));
  };

  std::vector<double> y0(2 * n);
  std::copy(u0.begin(), u0.end(), y0.begin());
  std::copy(u1.begin(), u1.end(), y0.begin() + static_cast<std::ptrdiff_t>(n));

  const double threshold = settings.blowup_threshold;
  const DormandPrince45 stepper(rhs, 2 * n, options);
  const auto result = stepper.integrate(
      y0, times, [&](std::size_t, double t, std::span<const double> y) { record(t, y); },
      [threshold](double, std::span<const double> y) {
        double size = 0.0;
        for (double v : y) size += v * v;
        return !(size <= threshold);
      });

  if (result.status == DormandPrince45::Status::Completed) {
    traj.t_stop = traj.times.back();
  } else {
    const auto status = result.status == DormandPrince45::Status::Stopped
                            ? SolveStatus::BlewUp
                            : SolveStatus::StepUnderflow;
    append_stop_sample(traj, status, result.t_stop,
                       [&](double t) { record(t, result.y_stop); });
  }
  return traj;
}

namespace {

struct ReparamField {
  std::span<const double> lambda;
  const ModalVector& u0;
  const Nonlinearity& nl;
  const Dissipation& dis;

  // |A^{1/2} v(alpha)|^2 for the heat semigroup v(alpha) = exp(-alpha A) u0
  double sigma(double alpha) const {
    CompensatedSum sum;
    for (std::size_t k = 0; k < lambda.size(); ++k)
      sum.add(lambda[k] * u0[k] * u0[k] * std::exp(-2.0 * lambda[k] * alpha));
    return sum.result();
  }
  double alpha_rate(double t, double alpha) const {
    return stiffness(nl, sigma(alpha)) / damping(dis, t);
  }
};

}  // namespace

Trajectory solve_parabolic_reparam(const Spectrum& spec, const Nonlinearity& nl,
                                   const Dissipation& dis, const ModalVector& u0,
                                   const IntegratorSettings& settings) {
  const auto times = make_grid(settings.grid);
  return solve_parabolic_reparam(spec, nl, dis, u0, settings, times);
}

Trajectory solve_parabolic_reparam(const Spectrum& spec, const Nonlinearity& nl,
                                   const Dissipation& dis, const ModalVector& u0,
                                   const IntegratorSettings& settings,
                                   std::span<const double> times) {
  require_matching(spec, u0, "u0");
  settings.validate();
  check_times(times);

  const std::size_t n = spec.size();
  const ReparamField field{spec.eigenvalues(), u0, nl, dis};
  Trajectory traj;
  traj.alpha.emplace();
  warn_if_really_degenerate(traj, nl, field.sigma(0.0));

  auto record = [&](double t, double alpha) {
    const double rate = field.alpha_rate(t, alpha);
    ModalVector u(n), up(n);
    for (std::size_t k = 0; k < n; ++k) {
      u[k] = u0[k] * std::exp(-spec[k] * alpha);
      up[k] = -rate * spec[k] * u[k];
    }
    traj.times.push_back(t);
    traj.u.push_back(std::move(u));
    traj.uprime.push_back(std::move(up));
    traj.alpha->push_back(alpha);
  };

  auto rhs = [&](double t, std::span<const double> y, std::span<double> dydt) {
    dydt[0] = field.alpha_rate(t, y[0]);
  };
  const DormandPrince45 stepper(rhs, 1, ode_options(settings));
  const std::vector<double> alpha0{0.0};
  const auto result = stepper.integrate(
      alpha0, times, [&](std::size_t, double t, std::span<const double> y) { record(t, y[0]); });

  if (result.status == DormandPrince45::Status::Completed) {
    traj.t_stop = traj.times.back();
  } else {
    append_stop_sample(traj, SolveStatus::StepUnderflow, result.t_stop,
                       [&](double t) { record(t, result.y_stop[0]); });
  }
  return traj;
}

Trajectory solve_parabolic_direct(const Spectrum& spec, const Nonlinearity& nl,
                                  const Dissipation& dis, const ModalVector& u0,
                                  const IntegratorSettings& settings) {
  const auto times = make_grid(settings.grid);
  return solve_parabolic_direct(spec, nl, dis, u0, settings, times);
}

Trajectory solve_parabolic_direct(const Spectrum& spec, const Nonlinearity& nl,
                                  const Dissipation& dis, const ModalVector& u0,
                                  const IntegratorSettings& settings,
                                  std::span<const double> times) {
  require_matching(spec, u0, "u0");
  settings.validate();
  check_times(times);

  const std::size_t n = spec.size();
  const auto lambda = spec.eigenvalues();
  Trajectory traj;
  warn_if_really_degenerate(traj, nl, sobolev_norm_sq(spec, u0, 0.5));

  auto rhs = [&](double t, std::span<const double> y, std::span<double> dydt) {
    CompensatedSum sigma;
    for (std::size_t k = 0; k < n; ++k) sigma.add(lambda[k] * y[k] * y[k]);
    const double rate = stiffness(nl, std::max(sigma.result(), 0.0)) / damping(dis, t);
    for (std::size_t k = 0; k < n; ++k) dydt[k] = -rate * lambda[k] * y[k];
  };
  auto record = [&](double t, std::span<const double> y) {
    ModalVector up(n);
    rhs(t, y, up.values());
    traj.times.push_back(t);
    traj.u.emplace_back(std::vector<double>(y.begin(), y.end()));
    traj.uprime.push_back(std::move(up));
  };

  const DormandPrince45 stepper(rhs, n, ode_options(settings));
  const std::vector<double> y0(u0.begin(), u0.end());
  const auto result = stepper.integrate(
      y0, times, [&](std::size_t, double t, std::span<const double> y) { record(t, y); });

  if (result.status == DormandPrince45::Status::Completed) {
    traj.t_stop = traj.times.back();
  } else {
    append_stop_sample(traj, SolveStatus::StepUnderflow, result.t_stop,
                       [&](double t) { record(t, result.y_stop); });
  }
  return traj;
}

std::vector<double> corrector_profile(const Dissipation& dis, double eps,
                                      std::span<const double> times, double abs_tol) {
  if (!(eps > 0.0)) throw DomainError("corrector: eps must be positive");
  if (times.empty() || times.front() != 0.0)
    throw UsageError("corrector: times must start at t = 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw UsageError("corrector: times must be increasing");

  std::vector<double> profile(times.size(), 0.0);
  const bool constant_rate = std::holds_alternative<ConstantDissipation>(dis) ||
                             dissipation_exponent(dis) == 0.0;
  if (constant_rate) {
    // B(t) = b0 t, so the integral is (eps/b0)(1 - exp(-b0 t/eps))
    const double b0 = damping(dis, 0.0);
    for (std::size_t i = 0; i < times.size(); ++i)
      profile[i] = -(eps / b0) * std::expm1(-b0 * times[i] / eps);
    return profile;
  }

  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [&](double s) { return std::exp(-eval_dissipation(dis, s).B / eps); };
  double accumulated = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double a = times[i - 1], b = times[i];
    // integrand <= exp(-B(a)/eps), so the piece is at most `bound`
    const double bound = integrand(a) * (b - a);
    const double piece_tol = abs_tol / static_cast<double>(times.size());
    if (bound < 1e-3 * piece_tol) {
      profile[i] = accumulated;
      continue;
    }
    // Relative requests below the integrand's own rounding (about B/eps ulps) cannot converge.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                         (1.0 + eval_dissipation(dis, b).B / eps);
    const double rel_tol = std::max(piece_tol / bound, noise);
    double error = 0.0;
    const double piece = gauss_kronrod<double, 15>::integrate(integrand, a, b, 12, rel_tol, &error);
    accumulated += piece;
    profile[i] = accumulated;
  }
  return profile;
}

CorrectorTrajectory corrector(const Spectrum& spec, const Nonlinearity& nl, const Dissipation& dis,
                              double eps, const ModalVector& u0, const ModalVector& u1,
                              std::span<const double> times) {
  const ModalVector w0 = compute_w0(spec, nl, dis, u0, u1);
  const auto profile = corrector_profile(dis, eps, times);
  CorrectorTrajectory corr;
  corr.times.assign(times.begin(), times.end());
  corr.theta.reserve(times.size());
  corr.theta_prime.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double decay = std::exp(-eval_dissipation(dis, times[i]).B / eps);
    corr.theta.push_back(profile[i] * w0);
    corr.theta_prime.push_back(decay * w0);
  }
  return corr;
}

namespace {

// Three-point derivative at sample i of a nonuniform grid.
struct CenteredStencil {
  double left, mid, right;
};

CenteredStencil stencil(std::span<const double> t, std::size_t i) {
  const double h1 = t[i] - t[i - 1];
  const double h2 = t[i + 1] - t[i];
  return {-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))};
}

}  // namespace

double residual_norm(const Trajectory& traj, const Spectrum& spec, const Nonlinearity& nl,
                     const Dissipation& dis, double eps) {
  if (traj.size() < 3) throw UsageError("residual_norm: at least 3 samples are required");
  if (!(eps >= 0.0)) throw DomainError("residual_norm: eps must be nonnegative");
  const std::size_t n = spec.size();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    const auto w = stencil(traj.times, i);
    const ModalVector& u = traj.u[i];
    const ModalVector& up = traj.uprime[i];
    require_matching(spec, u, "u");
    const double t = traj.times[i];
    const double c = stiffness(nl, std::max(sobolev_norm_sq(spec, u, 0.5), 0.0));
    const double b = damping(dis, t);
    double defect = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double du = w.left * traj.u[i - 1][k] + w.mid * u[k] + w.right * traj.u[i + 1][k];
      const double kinematic = du - up[k];
      double equation;
      if (eps > 0.0) {
        const double dup =
            w.left * traj.uprime[i - 1][k] + w.mid * up[k] + w.right * traj.uprime[i + 1][k];
        equation = eps * dup + b * up[k] + c * spec[k] * u[k];
      } else {
        equation = b * du + c * spec[k] * u[k];
      }
      defect += kinematic * kinematic + equation * equation;
    }
    const double scale = 1.0 + std::sqrt(sobolev_norm_sq(spec, u, 0.0)) +
                         std::sqrt(sobolev_norm_sq(spec, up, 0.0));
    worst = std::max(worst, std::sqrt(defect) / scale);
  }
  return worst;
}

}  // namespace kirchhoff
