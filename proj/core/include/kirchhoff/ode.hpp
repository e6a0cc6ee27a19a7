#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace kirchhoff {

/// Adaptive Dormand-Prince 5(4) integrator that lands exactly on a
/// prescribed output grid. Error control uses the mixed norm
/// rms(err_i / (abs_tol + rel_tol * max(|y_i|, |ynew_i|))) <= 1.
class DormandPrince45 {
 public:
  using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
  /// Called once per grid time, including the initial one.
  using Observer = std::function<void(std::size_t index, double t, std::span<const double> y)>;
  /// Checked after every accepted step; returning true stops the run.
  using StopCondition = std::function<bool(double t, std::span<const double> y)>;

  struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double underflow_factor = 1e-14;  // h < factor * (1 + t) aborts
  };

  enum class Status { Completed, Stopped, StepUnderflow };

  struct Result {
    Status status = Status::Completed;
    double t_stop = 0.0;
    std::vector<double> y_stop;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
  };

  DormandPrince45(Rhs rhs, std::size_t dimension, Options options);

  /// grid must be strictly increasing; grid[0] is the initial time.
  Result integrate(std::span<const double> y0, std::span<const double> grid,
                   const Observer& observer, const StopCondition& stop = {}) const;

 private:
  double initial_step(double t, std::span<const double> y, std::span<const double> f0,
                      double direction_span) const;
  double error_norm(std::span<const double> y, std::span<const double> y_new,
                    std::span<const double> err) const;

  Rhs rhs_;
  std::size_t dim_;
  Options opt_;
};

}  // namespace kirchhoff
