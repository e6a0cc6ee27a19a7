#include "kirchhoff/energies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

const EnergyChannel* EnergySeries::find(std::string_view name) const {
  for (const auto& ch : channels)
    if (ch.name == name) return &ch;
  return nullptr;
}

const std::vector<double>& EnergySeries::channel(std::string_view name) const {
  if (const auto* ch = find(name)) return ch->values;
  throw UsageError("energy series has no channel '" + std::string(name) + "'");
}

double hamiltonian(const Spectrum& spec, const Nonlinearity& nl, double eps, const ModalVector& u,
                   const ModalVector& uprime) {
  if (!(eps >= 0.0)) throw DomainError("hamiltonian: eps must be nonnegative");
  const double kinetic = eps > 0.0 ? eps * sobolev_norm_sq(spec, uprime, 0.0) : 0.0;
  const double sigma = std::max(sobolev_norm_sq(spec, u, 0.5), 0.0);
  return kinetic + eval_nonlinearity(nl, sigma).M;
}

double gram_defect(const Spectrum& spec, const ModalVector& u, const ModalVector& uprime) {
  require_matching(spec, u, "u");
  require_matching(spec, uprime, "uprime");
  CompensatedSum sum;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.size(); ++j) {
      const double cross = u[i] * uprime[j] - u[j] * uprime[i];
      sum.add(spec[i] * spec[j] * cross * cross);
    }
  }
  return sum.result();
}

namespace {

std::string k_suffix(double k) {
  if (k == std::floor(k) && std::abs(k) < 1e6) return std::to_string(static_cast<long>(k));
  std::string s = std::to_string(k);
  s.erase(s.find_last_not_of('0') + 1);
  return s;
}

}  // namespace

EnergySeries energy_suite(const Trajectory& traj, const Spectrum& spec, const Nonlinearity& nl,
                          double eps, std::span<const double> ks) {
  if (traj.size() == 0) throw UsageError("energy_suite: empty trajectory");
  if (!(eps >= 0.0)) throw DomainError("energy_suite: eps must be nonnegative");
  for (double k : ks)
    if (!(k >= 0.0)) throw DomainError("energy_suite: k must be nonnegative");

  const std::size_t count = traj.size();
  const bool hyperbolic = eps > 0.0;
  EnergySeries series;
  series.times = traj.times;

  auto add = [&](std::string name) -> std::vector<double>& {
    series.channels.push_back({std::move(name), std::vector<double>(count, kUndefined)});
    return series.channels.back().values;
  };
  // indices instead of references: push_back may reallocate
  std::vector<std::size_t> eps_k_index, par_k_index;
  std::size_t c_i = 0, g_i = 0, p_i = 0, q_i = 0;
  if (hyperbolic) {
    add("c_eps");
    c_i = series.channels.size() - 1;
  }
  add("H_eps");
  const std::size_t h_i = series.channels.size() - 1;
  if (hyperbolic) {
    for (double k : ks) {
      add("E_eps_" + k_suffix(k));
      eps_k_index.push_back(series.channels.size() - 1);
    }
    add("G_eps");
    g_i = series.channels.size() - 1;
    add("P_eps");
    p_i = series.channels.size() - 1;
    add("Q_eps");
    q_i = series.channels.size() - 1;
  }
  for (double k : ks) {
    add("E_" + k_suffix(k));
    par_k_index.push_back(series.channels.size() - 1);
  }
  add("P_par");
  const std::size_t ppar_i = series.channels.size() - 1;
  add("E_half");
  const std::size_t ehalf_i = series.channels.size() - 1;
  add("E_one");
  const std::size_t eone_i = series.channels.size() - 1;
  add("V");
  const std::size_t v_i = series.channels.size() - 1;

  auto& ch = series.channels;
  for (std::size_t s = 0; s < count; ++s) {
    const ModalVector& u = traj.u[s];
    const ModalVector& up = traj.uprime[s];
    const double sigma = std::max(sobolev_norm_sq(spec, u, 0.5), 0.0);
    const double au_sq = sobolev_norm_sq(spec, u, 1.0);
    const double v_sq = sobolev_norm_sq(spec, up, 0.0);
    const double c = stiffness(nl, sigma);

    ch[h_i].values[s] = hamiltonian(spec, nl, eps, u, up);
    ch[ehalf_i].values[s] = sigma;
    ch[eone_i].values[s] = au_sq;
    ch[v_i].values[s] = v_sq;
    for (std::size_t j = 0; j < ks.size(); ++j)
      ch[par_k_index[j]].values[s] = sobolev_norm_sq(spec, u, ks[j] / 2.0);
    if (sigma > 0.0) ch[ppar_i].values[s] = au_sq / sigma;

    if (!hyperbolic) continue;
    ch[c_i].values[s] = c;
    if (c > 0.0) {
      for (std::size_t j = 0; j < ks.size(); ++j)
        ch[eps_k_index[j]].values[s] = eps * sobolev_norm_sq(spec, up, ks[j] / 2.0) / c +
                                       sobolev_norm_sq(spec, u, (ks[j] + 1.0) / 2.0);
      ch[g_i].values[s] = v_sq / (c * c);
      if (sigma > 0.0) {
        ch[p_i].values[s] = (eps / c) * gram_defect(spec, u, up) / (sigma * sigma) + au_sq / sigma;
        ch[q_i].values[s] = v_sq / (c * c * sigma);
      }
    }
  }
  return series;
}

std::vector<AprioriSample> apriori_margin(const Trajectory& traj, const Spectrum& spec,
                                          const Nonlinearity& nl, const Dissipation& dis,
                                          double eps) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<AprioriSample> out;
  out.reserve(traj.size());
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const ModalVector& u = traj.u[s];
    const ModalVector& up = traj.uprime[s];
    const double sigma = std::max(sobolev_norm_sq(spec, u, 0.5), 0.0);
    const double product =
        std::sqrt(sobolev_norm_sq(spec, u, 1.0)) * std::sqrt(sobolev_norm_sq(spec, up, 0.0));
    const auto value = eval_nonlinearity(nl, sigma);

    double basic = 0.0;
    if (product > 0.0 && value.m_prime != 0.0) {
      if (value.m == 0.0 || std::isinf(value.m_prime))
        basic = inf;
      else
        basic = eps * std::abs(value.m_prime) / value.m * product;
    }
    // sigma = 0 forces Au = 0, hence product = 0
    const double plus = product > 0.0 ? eps * product / sigma : 0.0;
    out.push_back({traj.times[s], basic, plus, damping(dis, traj.times[s])});
  }
  return out;
}

bool satisfies_apriori_regime(std::span<const AprioriSample> samples, double eps) {
  return std::all_of(samples.begin(), samples.end(), [eps](const AprioriSample& a) {
    return a.t < 10.0 * eps || a.lhs_basic <= a.rhs;
  });
}

}  // namespace kirchhoff
