#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kirchhoff/energies.hpp"
#include "kirchhoff/integrate.hpp"
#include "kirchhoff/model.hpp"
#include "kirchhoff/spectral.hpp"

namespace kirchhoff {

struct FitWindow {
  double t_lo;
  double t_hi;
};

/// [(1+t_end) 10^-decades - 1, t_end].
FitWindow last_decades(double t_end, double decades = 2.0);

struct RateFit {
  double exponent = 0.0;  // slope of the log-linear model
  double log_coefficient = 0.0;
  FitWindow window{0.0, 0.0};
  double rms_residual = 0.0;
  std::size_t samples = 0;

  /// alpha of an exponential model C exp(-alpha (1+t)^q), i.e. -exponent.
  double decay_constant() const { return -exponent; }
};

/// values ~ C (1+t)^beta by least squares of ln(values) on ln(1+t) over the
/// window. nullopt signals a skipped fit (a nonpositive or undefined value
/// in the window). Throws UsageError with fewer than 8 samples in the window.
std::optional<RateFit> fit_power_rate(std::span<const double> times, std::span<const double> values,
                                      FitWindow window);

/// values ~ C exp(-alpha (1+t)^q) with q = p + 1, by least squares of
/// ln(values) on (1+t)^q. exponent = -alpha.
std::optional<RateFit> fit_exponential_rate(std::span<const double> times,
                                            std::span<const double> values, double p,
                                            FitWindow window);

/// ln(sup) ~ order ln(eps) + c. Needs >= 4 values spanning >= 2 decades;
/// nullopt when some sup is zero.
std::optional<RateFit> fit_eps_order(std::span<const double> eps_list,
                                     std::span<const double> sup_values);

enum class Quantity { EHalf, EOne, V };
enum class BoundKind { PolyUpper, PolyLower, ExpUpper, ExpLower, IntegralUpper };

std::string_view to_string(Quantity q);
std::string_view to_string(BoundKind k);
/// Name of the EnergySeries channel holding the quantity.
std::string_view channel_name(Quantity q);

/// Poly entries: q ~ (1+t)^exponent. Exp entries: q ~ (1+t)^weight
/// exp(-alpha (1+t)^exponent). Integral entries: int (1+t)^weight q dt < inf.
struct BoundEntry {
  Quantity quantity;
  BoundKind kind;
  double exponent;
  std::optional<double> weight_exponent;

  friend bool operator==(const BoundEntry&, const BoundEntry&) = default;
};

struct BoundSet {
  Regime regime{RegimeTag::NoTheory, std::nullopt};
  bool skipped = false;  // no theory for this configuration
  std::vector<BoundEntry> entries;
};

BoundSet predicted_bounds(const Nonlinearity& nl, const Dissipation& dis, bool coercive,
                          bool hyperbolic_run);

enum class Verdict { Pass, Fail, Skipped };
std::string_view to_string(Verdict v);

struct VerificationEntry {
  BoundEntry predicted;
  std::optional<RateFit> fitted;
  Verdict verdict = Verdict::Skipped;
  double margin = 0.0;
};

struct VerificationReport {
  std::vector<VerificationEntry> entries;
  bool bounds_skipped = false;

  /// Fail if any entry fails, else Pass if any entry passes, else Skipped.
  Verdict overall() const;
};

/// Window defaults to the last two decades of (1+t).
VerificationReport verify_bounds(const EnergySeries& series, const BoundSet& bounds,
                                 double tol_exponent = 0.07,
                                 std::optional<FitWindow> window = std::nullopt);

struct ErrorSeries {
  std::vector<double> times;
  std::vector<ModalVector> rho;      // u_eps - u
  std::vector<ModalVector> r;        // rho - theta
  std::vector<ModalVector> r_prime;  // u_eps' - u' - theta'

  std::vector<double> rho_sq;          // |rho|^2
  std::vector<double> rho_half_sq;     // |A^{1/2} rho|^2
  std::vector<double> rho_one_sq;      // |A rho|^2
  std::vector<double> rprime_sq;       // |r'|^2
  std::vector<double> rprime_half_sq;  // |A^{1/2} r'|^2

  std::vector<double> weighted_rho_half_sq;  // (1+t)^{p+1} |A^{1/2} rho|^2
  std::vector<double> weighted_rho_one_sq;   // (1+t)^{2(p+1)} |A rho|^2
  std::vector<double> weighted_rprime_sq;    // (1+t)^2 |r'|^2

  std::vector<double> integral_low;   // int (1+s)^p (|r'|^2 + |A^{1/2}rho|^2)
  std::vector<double> integral_high;  // int (1+s)^{2p+1} (|A^{1/2}r'|^2 + |A rho|^2)
};

/// Throws UsageError unless the three inputs share one time grid.
ErrorSeries perturbation_errors(const Spectrum& spec, const Trajectory& traj_eps,
                                const Trajectory& traj_par, const CorrectorTrajectory& corr,
                                const Dissipation& dis);

struct FloorSample {
  double t;
  double hamiltonian;
  double floor;   // H(0) exp(-2 B(t) / eps)
  double margin;  // hamiltonian - floor
};

std::vector<FloorSample> hamiltonian_floor(const Trajectory& traj, const Spectrum& spec,
                                           const Nonlinearity& nl, const Dissipation& dis,
                                           double eps);

/// Largest value over samples with t <= t_max (undefined samples ignored).
double sup_until(std::span<const double> times, std::span<const double> values,
                 double t_max = std::numeric_limits<double>::infinity());

/// min over samples with t <= t_max of |u'|^2 + |A^{1/2}u|^2.
double min_phase_energy(const Trajectory& traj, const Spectrum& spec,
                        double t_max = std::numeric_limits<double>::infinity());

/// Worst relative increase max_i (H_{i+1} - H_i) / max(H_i, tiny); <= 0 when monotone.
double hamiltonian_max_increase(std::span<const double> hamiltonian);

}  // namespace kirchhoff
