#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kirchhoff/integrate.hpp"
#include "kirchhoff/model.hpp"
#include "kirchhoff/spectral.hpp"

namespace kirchhoff {

/// Marks channel samples whose defining denominator vanishes.
inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
inline bool is_defined(double value) { return !std::isnan(value); }

struct EnergyChannel {
  std::string name;
  std::vector<double> values;
};

/// Energy functionals sampled along a trajectory.
///
/// Channel names: c_eps, H_eps, E_eps_<k>, G_eps, P_eps, Q_eps (hyperbolic
/// series only), E_<k>, P_par, and the plain norms E_half = |A^{1/2}u|^2,
/// E_one = |Au|^2, V = |u'|^2.
struct EnergySeries {
  std::vector<double> times;
  std::vector<EnergyChannel> channels;

  /// nullptr when the series has no such channel.
  const EnergyChannel* find(std::string_view name) const;
  /// Throws UsageError when missing.
  const std::vector<double>& channel(std::string_view name) const;
};

/// eps |u'|^2 + M(|A^{1/2}u|^2).
double hamiltonian(const Spectrum& spec, const Nonlinearity& nl, double eps, const ModalVector& u,
                   const ModalVector& uprime);

/// |A^{1/2}u|^2 |A^{1/2}u'|^2 - <Au,u'>^2, evaluated through the Lagrange
/// identity so the result is never negative.
double gram_defect(const Spectrum& spec, const ModalVector& u, const ModalVector& uprime);

/// ks selects the E_eps_k channels; parabolic E_k channels cover ks as well.
/// eps = 0 yields only the parabolic channels plus H_eps = M(|A^{1/2}u|^2).
EnergySeries energy_suite(const Trajectory& traj, const Spectrum& spec, const Nonlinearity& nl,
                          double eps, std::span<const double> ks);

struct AprioriSample {
  double t;
  double lhs_basic;      // eps |m'|/m |Au||u'|; +inf where m = 0 or m' is infinite
  double lhs_basicplus;  // eps |Au||u'| / |A^{1/2}u|^2
  double rhs;            // b(t)
};

std::vector<AprioriSample> apriori_margin(const Trajectory& traj, const Spectrum& spec,
                                          const Nonlinearity& nl, const Dissipation& dis,
                                          double eps);

/// True when lhs_basic <= rhs at every sample with t >= 10 eps.
bool satisfies_apriori_regime(std::span<const AprioriSample> samples, double eps);

}  // namespace kirchhoff
