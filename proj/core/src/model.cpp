#include "kirchhoff/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInfinity = std::numeric_limits<double>::infinity();
}  // namespace

TableNonlinearity::TableNonlinearity(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw ConfigError("m.points: at least one breakpoint is required");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto [sigma, value] = points_[i];
    if (!std::isfinite(sigma) || sigma < 0.0)
      throw ConfigError("m.points: breakpoint sigma must be finite and nonnegative");
    if (!std::isfinite(value) || value < 0.0)
      throw ConfigError("m.points: m values must be finite and nonnegative");
    if (i > 0 && !(sigma > points_[i - 1].first))
      throw ConfigError("m.points: sigma grid must be strictly increasing");
  }
  primitive_.resize(points_.size());
  primitive_[0] = points_[0].second * points_[0].first;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double width = points_[i].first - points_[i - 1].first;
    primitive_[i] = primitive_[i - 1] + 0.5 * width * (points_[i].second + points_[i - 1].second);
  }
  mu_ = kInfinity;
  for (const auto& [sigma, value] : points_) {
    mu_ = std::min(mu_, value);
    max_value_ = std::max(max_value_, value);
  }
}

TableNonlinearity::Value TableNonlinearity::evaluate(double sigma) const {
  const auto& first = points_.front();
  const auto& last = points_.back();
  if (sigma < first.first) return {first.second, first.second * sigma, 0.0};
  if (sigma >= last.first)
    return {last.second, primitive_.back() + last.second * (sigma - last.first), 0.0};
  // segment i with sigma_i <= sigma < sigma_{i+1}; right derivative at breakpoints
  const auto it = std::upper_bound(points_.begin(), points_.end(), sigma,
                                   [](double s, const auto& pt) { return s < pt.first; });
  const std::size_t i = static_cast<std::size_t>(it - points_.begin()) - 1;
  const auto [s0, m0] = points_[i];
  const auto [s1, m1] = points_[i + 1];
  const double slope = (m1 - m0) / (s1 - s0);
  const double d = sigma - s0;
  return {m0 + slope * d, primitive_[i] + m0 * d + 0.5 * slope * d * d, slope};
}

Nonlinearity constant_nonlinearity(double value) {
  return TableNonlinearity({{0.0, value}});
}

NonlinearityValue eval_nonlinearity(const Nonlinearity& nl, double sigma) {
  if (!(sigma >= 0.0)) throw DomainError("eval_nonlinearity: sigma must be nonnegative");
  return std::visit(
      overloaded{
          [sigma](const PowerNonlinearity& power) -> NonlinearityValue {
            const double g = power.gamma;
            if (sigma == 0.0) {
              const double slope = g < 1.0 ? kInfinity : (g == 1.0 ? 1.0 : 0.0);
              return {0.0, 0.0, slope};
            }
            const double m = std::pow(sigma, g);
            return {m, m * sigma / (g + 1.0), g * m / sigma};
          },
          [sigma](const TableNonlinearity& table) -> NonlinearityValue {
            const auto v = table.evaluate(sigma);
            return {v.m, v.M, v.m_prime};
          }},
      nl);
}

double nondegeneracy_constant(const Nonlinearity& nl) {
  return std::visit(overloaded{[](const PowerNonlinearity&) { return 0.0; },
                               [](const TableNonlinearity& table) { return table.mu(); }},
                    nl);
}

void validate(const Nonlinearity& nl) {
  if (const auto* power = std::get_if<PowerNonlinearity>(&nl)) {
    if (!(power->gamma > 0.0) || !std::isfinite(power->gamma))
      throw ConfigError("m.gamma: must be a positive finite number");
  }
}

void validate(const Dissipation& dis) {
  std::visit(overloaded{[](const PowerLawDissipation& d) {
                          if (!(d.p >= 0.0) || !std::isfinite(d.p))
                            throw ConfigError("b.p: must be a nonnegative finite number");
                        },
                        [](const ConstantDissipation& d) {
                          if (!(d.delta > 0.0) || !std::isfinite(d.delta))
                            throw ConfigError("b.delta: must be a positive finite number");
                        }},
             dis);
}

DissipationValue eval_dissipation(const Dissipation& dis, double t) {
  return std::visit(
      overloaded{[t](const PowerLawDissipation& d) -> DissipationValue {
                   if (d.p == 0.0) return {1.0, t};
                   const double log1t = std::log1p(t);
                   const double b = std::exp(-d.p * log1t);
                   if (d.p == 1.0) return {b, log1t};
                   const double s = 1.0 - d.p;
                   // ((1+t)^s - 1)/s without cancellation near p = 1
                   return {b, std::expm1(s * log1t) / s};
                 },
                 [t](const ConstantDissipation& d) -> DissipationValue {
                   return {d.delta, d.delta * t};
                 }},
      dis);
}

bool dissipation_integrable(const Dissipation& dis) {
  if (const auto* d = std::get_if<PowerLawDissipation>(&dis)) return d->p > 1.0;
  return false;
}

double dissipation_exponent(const Dissipation& dis) {
  if (const auto* d = std::get_if<PowerLawDissipation>(&dis)) return d->p;
  return 0.0;
}

double p_gamma(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("p_gamma: gamma must be positive");
  if (gamma >= 1.0) return (gamma * gamma + 1.0) / (gamma * gamma + 2.0 * gamma - 1.0);
  return gamma / (gamma + 2.0);
}

std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Parabolic:
      return "parabolic";
    case RegimeTag::Hyperbolic:
      return "hyperbolic";
    case RegimeTag::NoMansLand:
      return "no_mans_land";
    case RegimeTag::NoTheory:
      return "no_theory";
  }
  return "unknown";
}

Regime classify_regime(const Nonlinearity& nl, const Dissipation& dis, bool coercive) {
  const double p = dissipation_exponent(dis);
  if (p > 1.0) return {RegimeTag::Hyperbolic, std::nullopt};
  if (nondegeneracy_constant(nl) > 0.0) return {RegimeTag::Parabolic, std::nullopt};
  if (const auto* power = std::get_if<PowerNonlinearity>(&nl)) {
    if (coercive) return {RegimeTag::Parabolic, std::nullopt};
    const double threshold = p_gamma(power->gamma);
    return {p <= threshold ? RegimeTag::Parabolic : RegimeTag::NoMansLand, threshold};
  }
  // degenerate Lipschitz table: only constant dissipation has decay theory
  return {p > 0.0 ? RegimeTag::NoTheory : RegimeTag::Parabolic, std::nullopt};
}

ModalVector compute_w0(const Spectrum& spec, const Nonlinearity& nl, const Dissipation& dis,
                       const ModalVector& u0, const ModalVector& u1) {
  require_matching(spec, u0, "u0");
  require_matching(spec, u1, "u1");
  const double c0 = stiffness(nl, sobolev_norm_sq(spec, u0, 0.5));
  const double b0 = damping(dis, 0.0);
  ModalVector w0 = u1;
  for (std::size_t k = 0; k < spec.size(); ++k) w0[k] += c0 * spec[k] * u0[k] / b0;
  return w0;
}

double stiffness_bound(const Nonlinearity& nl, double hamiltonian) {
  return std::visit(overloaded{[hamiltonian](const PowerNonlinearity& power) {
                                 const double g = power.gamma;
                                 const double h = std::max(hamiltonian, 0.0);
                                 return std::pow((g + 1.0) * h, g / (g + 1.0));
                               },
                               [](const TableNonlinearity& table) { return table.max_value(); }},
                      nl);
}

}  // namespace kirchhoff
