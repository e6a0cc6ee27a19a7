#include "kirchhoff/ode.hpp"

#include <algorithm>
#include <cmath>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

namespace {

// Dormand & Prince (1980) RK5(4)7FM tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// 5th order weights minus embedded 4th order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI step-size controller constants (Hairer, Norsett & Wanner).
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

}  // namespace

DormandPrince45::DormandPrince45(Rhs rhs, std::size_t dimension, Options options)
    : rhs_(std::move(rhs)), dim_(dimension), opt_(options) {
  if (!(opt_.rel_tol > 0.0) || !(opt_.abs_tol > 0.0))
    throw ConfigError("integrator tolerances must be positive");
  if (!(opt_.max_step > 0.0)) throw ConfigError("integrator max_step must be positive");
}

double DormandPrince45::error_norm(std::span<const double> y, std::span<const double> y_new,
                                   std::span<const double> err) const {
  if (dim_ == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double scale = opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(dim_));
}

double DormandPrince45::initial_step(double t, std::span<const double> y,
                                     std::span<const double> f0, double span) const {
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double scale = opt_.abs_tol + opt_.rel_tol * std::abs(y[i]);
    d0 += (y[i] / scale) * (y[i] / scale);
    d1 += (f0[i] / scale) * (f0[i] / scale);
  }
  const double n = std::max<double>(1.0, static_cast<double>(dim_));
  d0 = std::sqrt(d0 / n);
  d1 = std::sqrt(d1 / n);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min({h0, span, opt_.max_step});

  std::vector<double> y1(dim_), f1(dim_);
  for (std::size_t i = 0; i < dim_; ++i) y1[i] = y[i] + h0 * f0[i];
  rhs_(t + h0, y1, f1);
  double d2 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double scale = opt_.abs_tol + opt_.rel_tol * std::abs(y[i]);
    const double r = (f1[i] - f0[i]) / scale;
    d2 += r * r;
  }
  d2 = std::sqrt(d2 / n) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span, opt_.max_step});
}

DormandPrince45::Result DormandPrince45::integrate(std::span<const double> y0,
                                                   std::span<const double> grid,
                                                   const Observer& observer,
                                                   const StopCondition& stop) const {
  if (y0.size() != dim_) throw UsageError("DormandPrince45: initial state has wrong dimension");
  if (grid.empty()) throw UsageError("DormandPrince45: empty output grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw UsageError("DormandPrince45: grid must be increasing");

  Result result;
  std::vector<double> y(y0.begin(), y0.end()), y_new(dim_), err(dim_), tmp(dim_);
  std::vector<double> k1(dim_), k2(dim_), k3(dim_), k4(dim_), k5(dim_), k6(dim_), k7(dim_);

  double t = grid.front();
  observer(0, t, y);
  if (grid.size() == 1 || dim_ == 0) {
    for (std::size_t i = 1; i < grid.size(); ++i) observer(i, grid[i], y);
    result.t_stop = grid.back();
    result.y_stop = y;
    return result;
  }

  rhs_(t, y, k1);
  double h = initial_step(t, y, k1, grid.back() - t);
  double fac_old = 1e-4;
  bool last_rejected = false;
  std::size_t next = 1;

  while (next < grid.size()) {
    const double target = grid[next];
    h = std::min(h, opt_.max_step);
    if (h < opt_.underflow_factor * (1.0 + std::abs(t))) {
      result.status = Status::StepUnderflow;
      break;
    }
    // land exactly on the next output time
    const bool hits_target = t + h >= target;
    const double step = hits_target ? target - t : h;

    for (std::size_t i = 0; i < dim_; ++i) tmp[i] = y[i] + step * a21 * k1[i];
    rhs_(t + c2 * step, tmp, k2);
    for (std::size_t i = 0; i < dim_; ++i) tmp[i] = y[i] + step * (a31 * k1[i] + a32 * k2[i]);
    rhs_(t + c3 * step, tmp, k3);
    for (std::size_t i = 0; i < dim_; ++i)
      tmp[i] = y[i] + step * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs_(t + c4 * step, tmp, k4);
    for (std::size_t i = 0; i < dim_; ++i)
      tmp[i] = y[i] + step * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs_(t + c5 * step, tmp, k5);
    for (std::size_t i = 0; i < dim_; ++i)
      tmp[i] = y[i] + step * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = hits_target ? target : t + step;
    rhs_(t_new, tmp, k6);
    for (std::size_t i = 0; i < dim_; ++i)
      y_new[i] = y[i] + step * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs_(t_new, y_new, k7);
    for (std::size_t i = 0; i < dim_; ++i)
      err[i] = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    const double norm = error_norm(y, y_new, err);
    if (!std::isfinite(norm)) {
      h = step * kMinFactor;
      last_rejected = true;
      ++result.rejected_steps;
      continue;
    }

    const double fac11 = std::pow(norm, kExpo);
    double fac = fac11 / std::pow(fac_old, kBeta);
    fac = std::clamp(fac / kSafety, 1.0 / kMaxFactor, 1.0 / kMinFactor);
    const double h_suggested = step / fac;

    if (norm <= 1.0) {
      fac_old = std::max(norm, 1e-4);
      ++result.accepted_steps;
      t = t_new;
      y.swap(y_new);
      k1.swap(k7);  // first same as last
      double h_next = h_suggested;
      if (last_rejected)
        h_next = std::min(h_next, step);
      else if (hits_target && step < h)
        h_next = std::max(h_next, h);  // clipped landing step keeps the proposal
      h = h_next;
      last_rejected = false;
      if (hits_target) {
        observer(next, t, y);
        ++next;
      }
      if (stop && stop(t, y)) {
        result.status = Status::Stopped;
        break;
      }
    } else {
      h = step / std::min(1.0 / kMinFactor, fac11 / kSafety);
      last_rejected = true;
      ++result.rejected_steps;
    }
  }
  result.t_stop = t;
  result.y_stop = y;
  return result;
}

}  // namespace kirchhoff
