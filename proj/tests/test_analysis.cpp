#include <doctest.h>

#include <cmath>

#include "kirchhoff/analysis.hpp"
#include "kirchhoff/errors.hpp"
#include "kirchhoff/integrate.hpp"
#include "test_support.hpp"

using namespace kirchhoff;

namespace {

std::vector<double> log_grid(double t_end, std::size_t n) { return make_grid({GridKind::Log, n, t_end}); }

template <class Fn>
std::vector<double> sample(const std::vector<double>& times, Fn fn) {
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) out[i] = fn(times[i]);
  return out;
}

EnergySeries series_of(std::vector<double> times, std::vector<std::pair<std::string, std::vector<double>>> chans) {
  EnergySeries s;
  s.times = std::move(times);
  for (auto& [name, values] : chans) s.channels.push_back({name, std::move(values)});
  return s;
}

}  // namespace

TEST_CASE("default window covers the last two decades of 1+t") {
  const auto w = last_decades(1e4 - 1.0);
  CHECK(w.t_lo == doctest::Approx(99.0));
  CHECK(w.t_hi == doctest::Approx(9999.0));
}

TEST_CASE("power-rate fits") {
  const auto t = log_grid(1e4, 400);
  const auto exact = fit_power_rate(t, sample(t, [](double s) { return std::pow(1 + s, -2.0); }),
                                    last_decades(t.back()));
  REQUIRE(exact);
  CHECK(exact->exponent == doctest::Approx(-2.0).epsilon(1e-6));

  const auto wiggly = fit_power_rate(
      t, sample(t, [](double s) { return 5.0 / (1 + s) * (1 + 0.01 * std::sin(s)); }), {100.0, 1e4});
  REQUIRE(wiggly);
  CHECK(std::abs(wiggly->exponent + 1.0) < 0.01);
  CHECK(wiggly->log_coefficient == doctest::Approx(std::log(5.0)).epsilon(0.01));

  const auto flat = fit_power_rate(t, sample(t, [](double) { return 3.0; }), {1.0, 1e4});
  REQUIRE(flat);
  CHECK(std::abs(flat->exponent) < 1e-12);
}

TEST_CASE("fits skip nonpositive data and reject short windows") {
  const auto t = log_grid(1e4, 400);
  auto v = sample(t, [](double s) { return 1.0 / (1 + s); });
  v[380] = 0.0;
  CHECK_FALSE(fit_power_rate(t, v, {100.0, 1e4}).has_value());
  v[380] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(fit_power_rate(t, v, {100.0, 1e4}).has_value());
  CHECK_THROWS_AS(fit_power_rate(t, v, {1e4 - 1.0, 1e4}), UsageError);
}

TEST_CASE("exponential-rate fits") {
  const auto t = make_grid({GridKind::Linear, 200, 10.0});
  const auto fit = fit_exponential_rate(t, sample(t, [](double s) { return std::exp(-2.0 * (1 + s)); }),
                                        0.0, {1.0, 10.0});
  REQUIRE(fit);
  CHECK(fit->decay_constant() == doctest::Approx(2.0).epsilon(1e-6));

  const auto fit2 = fit_exponential_rate(
      t, sample(t, [](double s) { return 3.0 * std::exp(-0.5 * std::pow(1 + s, 1.5)); }), 0.5, {1.0, 10.0});
  REQUIRE(fit2);
  CHECK(fit2->decay_constant() == doctest::Approx(0.5).epsilon(1e-6));

  // poly data are better explained by the poly model
  const auto lt = log_grid(1e4, 400);
  const auto poly = sample(lt, [](double s) { return 1.0 / (1 + s); });
  const auto as_exp = fit_exponential_rate(lt, poly, 0.0, {99.0, 1e4});
  const auto as_poly = fit_power_rate(lt, poly, {99.0, 1e4});
  REQUIRE(as_exp);
  REQUIRE(as_poly);
  CHECK(as_exp->rms_residual > 100.0 * as_poly->rms_residual + 1e-3);
}

TEST_CASE("heat mode has exponential rate twice the eigenvalue") {
  IntegratorSettings s;
  s.grid = {GridKind::Linear, 300, 30.0};
  const auto traj = solve_parabolic_reparam(Spectrum{1.0}, constant_nonlinearity(1.0),
                                            PowerLawDissipation{0.0}, ModalVector{1.0}, s);
  std::vector<double> sq;
  for (const auto& u : traj.u) sq.push_back(u[0] * u[0]);
  const auto fit = fit_exponential_rate(traj.times, sq, 0.0, {3.0, 30.0});
  REQUIRE(fit);
  CHECK(fit->decay_constant() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("eps-order fits") {
  const std::vector<double> eps{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  std::vector<double> sq, lin;
  for (double e : eps) {
    sq.push_back(e * e);
    lin.push_back(3.0 * e);
  }
  CHECK(fit_eps_order(eps, sq)->exponent == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit_eps_order(eps, lin)->exponent == doctest::Approx(1.0).epsilon(1e-9));
  sq[2] = 0.0;
  CHECK_FALSE(fit_eps_order(eps, sq).has_value());
  CHECK_THROWS(fit_eps_order(std::vector<double>{1e-2, 1e-3, 1e-4}, std::vector<double>{1, 2, 3}));
}

TEST_CASE("predicted bounds") {
  SUBCASE("coercive cubic sandwich") {
    const auto b = predicted_bounds(PowerNonlinearity{1.0}, PowerLawDissipation{0.0}, true, false);
    CHECK_FALSE(b.skipped);
    CHECK(std::count(b.entries.begin(), b.entries.end(),
                     BoundEntry{Quantity::EHalf, BoundKind::PolyLower, -1.0, std::nullopt}) == 1);
    CHECK(std::count(b.entries.begin(), b.entries.end(),
                     BoundEntry{Quantity::EHalf, BoundKind::PolyUpper, -1.0, std::nullopt}) == 1);
    CHECK(std::count(b.entries.begin(), b.entries.end(),
                     BoundEntry{Quantity::V, BoundKind::PolyUpper, -3.0, std::nullopt}) == 1);
  }
  SUBCASE("noncoercive gamma = 2, p = 1") {
    // p = 1 > p_gamma(2) lies in the no-man's land, so check the formulas at p = 1/2
    const auto none = predicted_bounds(PowerNonlinearity{2.0}, PowerLawDissipation{1.0}, false, false);
    CHECK(none.skipped);
    CHECK(none.entries.empty());
    const auto b = predicted_bounds(PowerNonlinearity{2.0}, PowerLawDissipation{0.5}, false, false);
    REQUIRE(b.entries.size() == 4);
    CHECK(b.entries[0].kind == BoundKind::PolyLower);
    CHECK(b.entries[0].exponent == doctest::Approx(-0.75));
    CHECK(b.entries[1].exponent == doctest::Approx(-0.5));
    CHECK(b.entries[2].exponent == doctest::Approx(-0.75));
    CHECK(b.entries[3].exponent == doctest::Approx(-(8.0 + 1.0 + 1.5) / 6.0));
  }
  SUBCASE("nondegenerate noncoercive") {
    const auto b = predicted_bounds(constant_nonlinearity(1.0), PowerLawDissipation{1.0}, false, false);
    CHECK(b.entries.front() == BoundEntry{Quantity::EHalf, BoundKind::PolyUpper, -2.0, std::nullopt});
    const auto h = predicted_bounds(constant_nonlinearity(1.0), PowerLawDissipation{0.5}, false, true);
    CHECK(std::any_of(h.entries.begin(), h.entries.end(),
                      [](const BoundEntry& e) { return e.kind == BoundKind::IntegralUpper; }));
  }
  SUBCASE("nondegenerate coercive parabolic runs get exponential bounds") {
    const auto b = predicted_bounds(constant_nonlinearity(1.0), PowerLawDissipation{0.0}, true, false);
    CHECK(std::all_of(b.entries.begin(), b.entries.end(), [](const BoundEntry& e) {
      return e.kind == BoundKind::ExpLower || e.kind == BoundKind::ExpUpper;
    }));
  }
  SUBCASE("hyperbolic regime is skipped") {
    CHECK(predicted_bounds(PowerNonlinearity{1.0}, PowerLawDissipation{1.5}, true, false).skipped);
  }
}

TEST_CASE("verification against closed-form single-mode decay") {
  // u^2 = u0^2 / (1 + 2 u0^2 t) and u' = -u^3 for u0 = 1
  const auto t = log_grid(1e5, 600);
  const auto e_half = sample(t, [](double s) { return 1.0 / (1 + 2 * s); });
  const auto v = sample(t, [](double s) { return std::pow(1 + 2 * s, -3.0); });
  const auto series = series_of(t, {{"E_half", e_half}, {"E_one", e_half}, {"V", v}});
  const auto bounds = predicted_bounds(PowerNonlinearity{1.0}, PowerLawDissipation{0.0}, true, false);
  const auto report = verify_bounds(series, bounds);
  CHECK(report.overall() == Verdict::Pass);
  for (const auto& e : report.entries) {
    REQUIRE(e.fitted);
    if (e.predicted.quantity == Quantity::EHalf) CHECK(e.fitted->exponent == doctest::Approx(-1.0).epsilon(0.01));
    if (e.predicted.quantity == Quantity::V) CHECK(e.fitted->exponent == doctest::Approx(-3.0).epsilon(0.01));
  }
}

TEST_CASE("verification failures and skips") {
  const auto t = log_grid(1e5, 600);
  SUBCASE("too slow decay fails the upper bound") {
    const auto slow = sample(t, [](double s) { return std::pow(1 + s, -0.5); });
    const BoundSet set{{RegimeTag::Parabolic, std::nullopt}, false,
                       {{Quantity::EHalf, BoundKind::PolyUpper, -1.0, std::nullopt}}};
    const auto r = verify_bounds(series_of(t, {{"E_half", slow}}), set);
    CHECK(r.entries[0].verdict == Verdict::Fail);
    CHECK(r.entries[0].margin < 0.0);
  }
  SUBCASE("too fast decay fails the lower bound") {
    const auto fast = sample(t, [](double s) { return std::pow(1 + s, -2.0); });
    const BoundSet set{{RegimeTag::Parabolic, std::nullopt}, false,
                       {{Quantity::EHalf, BoundKind::PolyLower, -1.0, std::nullopt}}};
    CHECK(verify_bounds(series_of(t, {{"E_half", fast}}), set).overall() == Verdict::Fail);
  }
  SUBCASE("undefined window is skipped") {
    const auto undefined = sample(t, [](double) { return std::numeric_limits<double>::quiet_NaN(); });
    const BoundSet set{{RegimeTag::Parabolic, std::nullopt}, false,
                       {{Quantity::EHalf, BoundKind::PolyUpper, -1.0, std::nullopt}}};
    const auto r = verify_bounds(series_of(t, {{"E_half", undefined}}), set);
    CHECK(r.entries[0].verdict == Verdict::Skipped);
    CHECK(r.overall() == Verdict::Skipped);
  }
  SUBCASE("integral bound") {
    const BoundSet set{{RegimeTag::Parabolic, std::nullopt}, false,
                       {{Quantity::V, BoundKind::IntegralUpper, 0.0, 1.0}}};
    const auto ok = sample(t, [](double s) { return std::pow(1 + s, -2.5); });
    const auto bad = sample(t, [](double s) { return std::pow(1 + s, -1.5); });
    CHECK(verify_bounds(series_of(t, {{"V", ok}}), set).overall() == Verdict::Pass);
    CHECK(verify_bounds(series_of(t, {{"V", bad}}), set).overall() == Verdict::Fail);
  }
  SUBCASE("window outside the series") {
    const BoundSet set{{RegimeTag::Parabolic, std::nullopt}, false, {}};
    CHECK_THROWS_AS(verify_bounds(series_of(t, {}), set, 0.07, FitWindow{0.0, 1e6}), UsageError);
  }
}

TEST_CASE("exponential bounds on heat decay") {
  const auto t = make_grid({GridKind::Linear, 400, 40.0});
  const auto e = sample(t, [](double s) { return std::exp(-2.0 * s); });
  const auto series = series_of(t, {{"E_half", e}, {"E_one", e}, {"V", e}});
  const auto bounds = predicted_bounds(constant_nonlinearity(1.0), PowerLawDissipation{0.0}, true, false);
  CHECK(verify_bounds(series, bounds, 0.07, FitWindow{4.0, 40.0}).overall() == Verdict::Pass);
  // poly decay cannot pass an exponential upper bound
  const auto p = sample(t, [](double s) { return 1.0 / (1.0 + s); });
  const BoundSet upper{{RegimeTag::Parabolic, std::nullopt}, false,
                       {{Quantity::EHalf, BoundKind::ExpUpper, 1.0, std::nullopt}}};
  CHECK(verify_bounds(series_of(t, {{"E_half", p}}), upper, 0.07, FitWindow{4.0, 40.0}).overall() ==
        Verdict::Fail);
}

TEST_CASE("perturbation errors bookkeeping") {
  const Spectrum spec{1.0, 4.0};
  const ModalVector u0{1.0, 0.5}, u1{0.0, 0.0};
  const auto times = make_grid({GridKind::Linear, 41, 1.0});
  IntegratorSettings s;
  const Dissipation dis = PowerLawDissipation{0.0};
  const auto par = solve_parabolic_reparam(spec, PowerNonlinearity{1.0}, dis, u0, s, times);
  const auto hyp = solve_hyperbolic(spec, PowerNonlinearity{1.0}, dis, 1e-2, u0, u1, s, times);
  const auto corr = corrector(spec, PowerNonlinearity{1.0}, dis, 1e-2, u0, u1, times);
  const auto es = perturbation_errors(spec, hyp, par, corr, dis);
  CHECK(es.rho_sq[0] == 0.0);
  CHECK(es.r[0].is_zero());
  CHECK(sobolev_norm_sq(spec, es.r_prime[0], 0.0) < 1e-20);
  CHECK(es.integral_low[0] == 0.0);
  for (std::size_t i = 1; i < es.times.size(); ++i) CHECK(es.integral_low[i] >= es.integral_low[i - 1]);

  Trajectory same = par;
  CorrectorTrajectory zero{times, std::vector<ModalVector>(times.size(), ModalVector(2)),
                           std::vector<ModalVector>(times.size(), ModalVector(2))};
  const auto none = perturbation_errors(spec, same, par, zero, dis);
  CHECK(sup_until(none.times, none.rho_sq) == 0.0);
  CHECK(sup_until(none.times, none.rprime_sq) == 0.0);
  CHECK(none.integral_high.back() == 0.0);

  const auto other = make_grid({GridKind::Linear, 21, 1.0});
  const auto par2 = solve_parabolic_reparam(spec, PowerNonlinearity{1.0}, dis, u0, s, other);
  CHECK_THROWS_AS(perturbation_errors(spec, hyp, par2, corr, dis), UsageError);
}

TEST_CASE("hamiltonian floor") {
  IntegratorSettings s;
  s.grid = {GridKind::Log, 200, 100.0};
  const Spectrum spec{1.0};
  SUBCASE("integrable dissipation keeps the energy above the floor") {
    const double eps = 0.1;
    const auto traj = solve_hyperbolic(spec, PowerNonlinearity{1.0}, PowerLawDissipation{2.0}, eps,
                                       ModalVector{1.0}, ModalVector{0.0}, s);
    const auto floor = hamiltonian_floor(traj, spec, PowerNonlinearity{1.0}, PowerLawDissipation{2.0}, eps);
    for (const auto& f : floor) CHECK(f.margin >= -1e-8 * floor.front().hamiltonian);
    const double h0 = floor.front().hamiltonian;
    const double floor_inf = h0 * std::exp(-2.0 * eval_dissipation(PowerLawDissipation{2.0},
                                                                   std::numeric_limits<double>::infinity()).B / eps);
    CHECK(floor_inf == doctest::Approx(h0 * std::exp(-20.0)));
    CHECK(floor.back().floor >= floor_inf);
  }
  SUBCASE("zero data") {
    const auto traj = solve_hyperbolic(spec, PowerNonlinearity{1.0}, PowerLawDissipation{0.0}, 0.1,
                                       ModalVector{0.0}, ModalVector{0.0}, s);
    for (const auto& f : hamiltonian_floor(traj, spec, PowerNonlinearity{1.0}, PowerLawDissipation{0.0}, 0.1)) {
      CHECK(f.hamiltonian == 0.0);
      CHECK(f.floor == 0.0);
      CHECK(f.margin == 0.0);
    }
  }
}

TEST_CASE("series helpers") {
  const std::vector<double> t{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> v{1.0, 5.0, std::numeric_limits<double>::quiet_NaN(), 2.0};
  CHECK(sup_until(t, v) == 5.0);
  CHECK(sup_until(t, v, 0.5) == 1.0);
  CHECK(hamiltonian_max_increase(std::vector<double>{2.0, 1.0, 1.0}) <= 0.0);
  CHECK(hamiltonian_max_increase(std::vector<double>{1.0, 1.5}) == doctest::Approx(0.5));
  CHECK(std::isinf(hamiltonian_max_increase(std::vector<double>{0.0, 1.0})));
}
