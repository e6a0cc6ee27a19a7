#include "kirchhoff/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

FitWindow last_decades(double t_end, double decades) {
  const double lo = (1.0 + t_end) * std::pow(10.0, -decades) - 1.0;
  return {std::max(lo, 0.0), t_end};
}

namespace {

struct LinearFit {
  double slope, intercept, rms;
};

// Ordinary least squares y = slope x + intercept on centered data.
LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (slope * x[i] + intercept);
    ss += r * r;
  }
  return {slope, intercept, std::sqrt(ss / n)};
}

constexpr std::size_t kMinFitSamples = 8;

template <class Transform>
std::optional<RateFit> fit_log_model(std::span<const double> times, std::span<const double> values,
                                     FitWindow window, Transform abscissa) {
  if (times.size() != values.size()) throw UsageError("rate fit: times and values differ in length");
  if (!(window.t_lo < window.t_hi)) throw UsageError("rate fit: window must satisfy t_lo < t_hi");
  std::vector<double> x, y;
  bool nonpositive = false;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < window.t_lo || t > window.t_hi) continue;
    const double v = values[i];
    if (!(v > 0.0) || !std::isfinite(v)) {
      nonpositive = true;
      continue;
    }
    x.push_back(abscissa(t));
    y.push_back(std::log(v));
  }
  if (nonpositive) return std::nullopt;
  if (x.size() < kMinFitSamples)
    throw UsageError("rate fit: at least 8 samples are required in the window");
  const auto fit = least_squares(x, y);
  return RateFit{fit.slope, fit.intercept, window, fit.rms, x.size()};
}

}  // namespace

std::optional<RateFit> fit_power_rate(std::span<const double> times, std::span<const double> values,
                                      FitWindow window) {
  return fit_log_model(times, values, window, [](double t) { return std::log1p(t); });
}

std::optional<RateFit> fit_exponential_rate(std::span<const double> times,
                                            std::span<const double> values, double p,
                                            FitWindow window) {
  const double q = p + 1.0;
  return fit_log_model(times, values, window,
                       [q](double t) { return std::exp(q * std::log1p(t)); });
}

std::optional<RateFit> fit_eps_order(std::span<const double> eps_list,
                                     std::span<const double> sup_values) {
  if (eps_list.size() != sup_values.size())
    throw UsageError("fit_eps_order: eps list and sup values differ in length");
  if (eps_list.size() < 4) throw UsageError("fit_eps_order: at least 4 values of eps are required");
  const auto [lo, hi] = std::minmax_element(eps_list.begin(), eps_list.end());
  if (!(*lo > 0.0)) throw UsageError("fit_eps_order: eps values must be positive");
  if (*hi / *lo < 100.0 * (1.0 - 1e-12))
    throw UsageError("fit_eps_order: eps values must span at least two decades");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(sup_values[i] > 0.0)) return std::nullopt;
    x.push_back(std::log(eps_list[i]));
    y.push_back(std::log(sup_values[i]));
  }
  const auto fit = least_squares(x, y);
  return RateFit{fit.slope, fit.intercept, {*lo, *hi}, fit.rms, x.size()};
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::EHalf:
      return "E_half";
    case Quantity::EOne:
      return "E_one";
    case Quantity::V:
      return "V";
  }
  return "unknown";
}

std::string_view channel_name(Quantity q) { return to_string(q); }

std::string_view to_string(BoundKind k) {
  switch (k) {
    case BoundKind::PolyUpper:
      return "poly_upper";
    case BoundKind::PolyLower:
      return "poly_lower";
    case BoundKind::ExpUpper:
      return "exp_upper";
    case BoundKind::ExpLower:
      return "exp_lower";
    case BoundKind::IntegralUpper:
      return "integral_upper";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Skipped:
      return "skipped";
  }
  return "unknown";
}

BoundSet predicted_bounds(const Nonlinearity& nl, const Dissipation& dis, bool coercive,
                          bool hyperbolic_run) {
  BoundSet set;
  set.regime = classify_regime(nl, dis, coercive);
  if (set.regime.tag != RegimeTag::Parabolic) {
    set.skipped = true;
    return set;
  }
  const double p = dissipation_exponent(dis);
  auto& e = set.entries;
  using enum Quantity;
  using enum BoundKind;

  if (nondegeneracy_constant(nl) > 0.0) {
    if (coercive && !hyperbolic_run) {
      for (auto kind : {ExpLower, ExpUpper}) {
        e.push_back({EHalf, kind, p + 1.0, std::nullopt});
        e.push_back({EOne, kind, p + 1.0, std::nullopt});
        e.push_back({V, kind, p + 1.0, 2.0 * p});
      }
      return set;
    }
    e.push_back({EHalf, PolyUpper, -(p + 1.0), std::nullopt});
    e.push_back({EOne, PolyUpper, -2.0 * (p + 1.0), std::nullopt});
    e.push_back({V, PolyUpper, -2.0, std::nullopt});
    if (!hyperbolic_run) {
      e.push_back({EHalf, ExpLower, p + 1.0, std::nullopt});
    } else {
      e.push_back({V, IntegralUpper, 0.0, p});
      e.push_back({EHalf, IntegralUpper, 0.0, p});
      e.push_back({EOne, IntegralUpper, 0.0, 2.0 * p + 1.0});
    }
    return set;
  }

  const double g = std::get<PowerNonlinearity>(nl).gamma;
  if (coercive) {
    const double rate = -(p + 1.0) / g;
    e.push_back({EHalf, PolyLower, rate, std::nullopt});
    e.push_back({EHalf, PolyUpper, rate, std::nullopt});
    e.push_back({EOne, PolyLower, rate, std::nullopt});
    e.push_back({EOne, PolyUpper, rate, std::nullopt});
    if (!hyperbolic_run) e.push_back({V, PolyLower, rate - 2.0, std::nullopt});
    e.push_back({V, PolyUpper, rate - 2.0, std::nullopt});
  } else {
    e.push_back({EHalf, PolyLower, -(p + 1.0) / g, std::nullopt});
    e.push_back({EHalf, PolyUpper, -(p + 1.0) / (g + 1.0), std::nullopt});
    e.push_back({EOne, PolyUpper, -(p + 1.0) / g, std::nullopt});
    e.push_back({V, PolyUpper, -(2.0 * g * g + (1.0 - p) * g + p + 1.0) / (g * g + g),
                 std::nullopt});
  }
  return set;
}

Verdict VerificationReport::overall() const {
  bool any_pass = false;
  for (const auto& entry : entries) {
    if (entry.verdict == Verdict::Fail) return Verdict::Fail;
    any_pass = any_pass || entry.verdict == Verdict::Pass;
  }
  return any_pass ? Verdict::Pass : Verdict::Skipped;
}

namespace {

// (1+t)^(-weight) * values, undefined samples propagated
std::vector<double> reweighted(std::span<const double> times, std::span<const double> values,
                               double weight) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = values[i] * std::exp(-weight * std::log1p(times[i]));
  return out;
}

// Weighted sup (1+t)^(-exponent) q over the second half of the window does
// not exceed the first-half sup by more than the tolerance.
bool weighted_sup_bounded(std::span<const double> times, std::span<const double> values,
                          double exponent, FitWindow window, double tol) {
  const double split = std::sqrt((1.0 + window.t_lo) * (1.0 + window.t_hi)) - 1.0;
  double first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < window.t_lo || t > window.t_hi) continue;
    const double w = values[i] * std::exp(-exponent * std::log1p(t));
    if (t <= split)
      first = std::max(first, w);
    else
      second = std::max(second, w);
  }
  return second <= (1.0 + tol) * first;
}

VerificationEntry check_entry(const EnergySeries& series, const BoundEntry& bound, double tol,
                              FitWindow window) {
  VerificationEntry out{bound, std::nullopt, Verdict::Skipped, 0.0};
  const auto* channel = series.find(channel_name(bound.quantity));
  if (channel == nullptr) return out;
  std::span<const double> times = series.times;
  std::span<const double> values = channel->values;

  switch (bound.kind) {
    case BoundKind::PolyUpper:
    case BoundKind::PolyLower: {
      out.fitted = fit_power_rate(times, values, window);
      if (!out.fitted) return out;
      const double beta = out.fitted->exponent;
      if (bound.kind == BoundKind::PolyLower) {
        out.margin = beta - (bound.exponent - tol);
        out.verdict = out.margin >= 0.0 ? Verdict::Pass : Verdict::Fail;
      } else {
        out.margin = (bound.exponent + tol) - beta;
        const bool ok =
            out.margin >= 0.0 || weighted_sup_bounded(times, values, bound.exponent, window, tol);
        out.verdict = ok ? Verdict::Pass : Verdict::Fail;
      }
      return out;
    }
    case BoundKind::ExpUpper:
    case BoundKind::ExpLower: {
      const double p = bound.exponent - 1.0;
      const auto scaled = reweighted(times, values, bound.weight_exponent.value_or(0.0));
      out.fitted = fit_exponential_rate(times, scaled, p, window);
      if (!out.fitted) return out;
      if (bound.kind == BoundKind::ExpUpper) {
        const auto poly = fit_power_rate(times, scaled, window);
        const double poly_rms = poly ? poly->rms_residual : std::numeric_limits<double>::infinity();
        out.margin = poly_rms - out.fitted->rms_residual;
        const bool ok = out.fitted->decay_constant() > 0.0 && out.margin >= 0.0;
        out.verdict = ok ? Verdict::Pass : Verdict::Fail;
      } else {
        // the decay constant must not grow across the window (no faster-than-exp decay)
        const double split = std::sqrt((1.0 + window.t_lo) * (1.0 + window.t_hi)) - 1.0;
        const auto early = fit_exponential_rate(times, scaled, p, {window.t_lo, split});
        const auto late = fit_exponential_rate(times, scaled, p, {split, window.t_hi});
        if (!early || !late) return out;
        const double a1 = early->decay_constant(), a2 = late->decay_constant();
        out.margin = std::abs(a1) * (1.0 + tol) + 1e-12 - a2;
        out.verdict = out.margin >= 0.0 ? Verdict::Pass : Verdict::Fail;
      }
      return out;
    }
    case BoundKind::IntegralUpper: {
      out.fitted = fit_power_rate(times, values, window);
      if (!out.fitted) return out;
      const double w = bound.weight_exponent.value_or(0.0);
      out.margin = (-1.0 + tol) - (out.fitted->exponent + w);
      out.verdict = out.margin > 0.0 ? Verdict::Pass : Verdict::Fail;
      return out;
    }
  }
  return out;
}

}  // namespace

VerificationReport verify_bounds(const EnergySeries& series, const BoundSet& bounds,
                                 double tol_exponent, std::optional<FitWindow> window) {
  VerificationReport report;
  report.bounds_skipped = bounds.skipped;
  if (series.times.empty()) throw UsageError("verify_bounds: empty energy series");
  const FitWindow w = window.value_or(last_decades(series.times.back()));
  if (w.t_lo < series.times.front() || w.t_hi > series.times.back())
    throw UsageError("verify_bounds: window must lie inside the trajectory span");
  for (const auto& entry : bounds.entries) report.entries.push_back(check_entry(series, entry, tol_exponent, w));
  return report;
}

ErrorSeries perturbation_errors(const Spectrum& spec, const Trajectory& traj_eps,
                                const Trajectory& traj_par, const CorrectorTrajectory& corr,
                                const Dissipation& dis) {
  if (traj_eps.times != traj_par.times || traj_eps.times != corr.times)
    throw UsageError("perturbation_errors: hyperbolic, parabolic and corrector grids differ");
  const double p = dissipation_exponent(dis);
  const std::size_t count = traj_eps.size();

  ErrorSeries es;
  es.times = traj_eps.times;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = es.times[i];
    const double log1t = std::log1p(t);
    ModalVector rho = traj_eps.u[i] - traj_par.u[i];
    ModalVector r = rho - corr.theta[i];
    ModalVector rp = traj_eps.uprime[i] - traj_par.uprime[i] - corr.theta_prime[i];

    const double half = sobolev_norm_sq(spec, rho, 0.5);
    const double one = sobolev_norm_sq(spec, rho, 1.0);
    const double rp_sq = sobolev_norm_sq(spec, rp, 0.0);
    es.rho_sq.push_back(sobolev_norm_sq(spec, rho, 0.0));
    es.rho_half_sq.push_back(half);
    es.rho_one_sq.push_back(one);
    es.rprime_sq.push_back(rp_sq);
    es.rprime_half_sq.push_back(sobolev_norm_sq(spec, rp, 0.5));
    es.weighted_rho_half_sq.push_back(std::exp((p + 1.0) * log1t) * half);
    es.weighted_rho_one_sq.push_back(std::exp(2.0 * (p + 1.0) * log1t) * one);
    es.weighted_rprime_sq.push_back(std::exp(2.0 * log1t) * rp_sq);

    es.rho.push_back(std::move(rho));
    es.r.push_back(std::move(r));
    es.r_prime.push_back(std::move(rp));
  }

  // trapezoid accumulators
  auto integrand_low = [&](std::size_t i) {
    return std::exp(p * std::log1p(es.times[i])) * (es.rprime_sq[i] + es.rho_half_sq[i]);
  };
  auto integrand_high = [&](std::size_t i) {
    return std::exp((2.0 * p + 1.0) * std::log1p(es.times[i])) *
           (es.rprime_half_sq[i] + es.rho_one_sq[i]);
  };
  es.integral_low.assign(count, 0.0);
  es.integral_high.assign(count, 0.0);
  for (std::size_t i = 1; i < count; ++i) {
    const double h = es.times[i] - es.times[i - 1];
    es.integral_low[i] = es.integral_low[i - 1] + 0.5 * h * (integrand_low(i - 1) + integrand_low(i));
    es.integral_high[i] =
        es.integral_high[i - 1] + 0.5 * h * (integrand_high(i - 1) + integrand_high(i));
  }
  return es;
}

std::vector<FloorSample> hamiltonian_floor(const Trajectory& traj, const Spectrum& spec,
                                           const Nonlinearity& nl, const Dissipation& dis,
                                           double eps) {
  if (!(eps > 0.0)) throw DomainError("hamiltonian_floor: eps must be positive");
  std::vector<FloorSample> out;
  if (traj.size() == 0) return out;
  const double h0 = hamiltonian(spec, nl, eps, traj.u.front(), traj.uprime.front());
  out.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    const double h = hamiltonian(spec, nl, eps, traj.u[i], traj.uprime[i]);
    const double floor = h0 * std::exp(-2.0 * eval_dissipation(dis, t).B / eps);
    out.push_back({t, h, floor, h - floor});
  }
  return out;
}

double sup_until(std::span<const double> times, std::span<const double> values, double t_max) {
  double best = 0.0;
  for (std::size_t i = 0; i < times.size() && i < values.size(); ++i)
    if (times[i] <= t_max && is_defined(values[i])) best = std::max(best, values[i]);
  return best;
}

double min_phase_energy(const Trajectory& traj, const Spectrum& spec, double t_max) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.times[i] > t_max) break;
    best = std::min(best, sobolev_norm_sq(spec, traj.uprime[i], 0.0) +
                              sobolev_norm_sq(spec, traj.u[i], 0.5));
  }
  return best;
}

double hamiltonian_max_increase(std::span<const double> h) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < h.size(); ++i) {
    const double rise = h[i] - h[i - 1];
    if (h[i - 1] > 0.0)
      worst = std::max(worst, rise / h[i - 1]);
    else if (rise > 0.0)
      return std::numeric_limits<double>::infinity();
    else
      worst = std::max(worst, 0.0);
  }
  return h.size() < 2 ? 0.0 : worst;
}

}  // namespace kirchhoff
