#include <doctest.h>

#include <cmath>

#include "kirchhoff/energies.hpp"
#include "kirchhoff/integrate.hpp"
#include "test_support.hpp"

using namespace kirchhoff;
using kirchhoff::testing::Lcg;

namespace {

Trajectory single_sample(ModalVector u, ModalVector up) {
  Trajectory traj;
  traj.times = {0.0};
  traj.u = {std::move(u)};
  traj.uprime = {std::move(up)};
  return traj;
}

const std::vector<double> kKs{0.0, 1.0};

}  // namespace

TEST_CASE("hamiltonian values") {
  CHECK(hamiltonian(Spectrum{1.0}, PowerNonlinearity{1.0}, 0.5, ModalVector{1.0}, ModalVector{1.0}) ==
        1.0);
  CHECK(hamiltonian(Spectrum{1.0, 2.0}, PowerNonlinearity{1.0}, 0.5, ModalVector{0.0, 0.0},
                    ModalVector{0.0, 0.0}) == 0.0);
  CHECK(hamiltonian(Spectrum{4.0}, constant_nonlinearity(1.0), 1.0, ModalVector{1.0}, ModalVector{0.0}) ==
        4.0);
}

TEST_CASE("hyperbolic energy channels at a single state") {
  const auto series = energy_suite(single_sample(ModalVector{1.0}, ModalVector{0.0}), Spectrum{1.0},
                                   PowerNonlinearity{1.0}, 1.0, kKs);
  CHECK(series.channel("c_eps")[0] == 1.0);
  CHECK(series.channel("E_eps_0")[0] == 1.0);
  CHECK(series.channel("G_eps")[0] == 0.0);
  CHECK(series.channel("P_eps")[0] == 1.0);
  CHECK(series.channel("Q_eps")[0] == 0.0);
  CHECK(series.channel("H_eps")[0] == 0.5);
  CHECK(series.channel("E_0")[0] == 1.0);
  CHECK(series.channel("P_par")[0] == 1.0);
  CHECK(series.channel("E_half")[0] == 1.0);
  CHECK(series.channel("V")[0] == 0.0);
  for (const auto& ch : series.channels) CHECK(ch.values.size() == 1);
}

TEST_CASE("undefined sentinels where denominators vanish") {
  const auto series = energy_suite(single_sample(ModalVector{0.0, 0.0}, ModalVector{1.0, 0.0}),
                                   Spectrum{1.0, 2.0}, PowerNonlinearity{1.0}, 0.1, kKs);
  CHECK(series.channel("c_eps")[0] == 0.0);
  CHECK_FALSE(is_defined(series.channel("E_eps_0")[0]));
  CHECK_FALSE(is_defined(series.channel("G_eps")[0]));
  CHECK_FALSE(is_defined(series.channel("P_eps")[0]));
  CHECK_FALSE(is_defined(series.channel("Q_eps")[0]));
  CHECK_FALSE(is_defined(series.channel("P_par")[0]));
  CHECK(series.channel("H_eps")[0] == doctest::Approx(0.1));
}

TEST_CASE("parabolic series carries only parabolic channels") {
  const auto series = energy_suite(single_sample(ModalVector{1.0}, ModalVector{-1.0}), Spectrum{1.0},
                                   PowerNonlinearity{1.0}, 0.0, kKs);
  CHECK(series.find("E_eps_0") == nullptr);
  CHECK(series.find("P_eps") == nullptr);
  CHECK(series.find("E_1") != nullptr);
  CHECK(series.find("P_par") != nullptr);
  CHECK_THROWS(series.channel("G_eps"));
}

TEST_CASE("heat mode energies") {
  IntegratorSettings s;
  s.grid = {GridKind::Linear, 51, 5.0};
  const auto traj = solve_parabolic_reparam(Spectrum{1.0}, constant_nonlinearity(1.0),
                                            PowerLawDissipation{0.0}, ModalVector{1.0}, s);
  const auto series = energy_suite(traj, Spectrum{1.0}, constant_nonlinearity(1.0), 0.0, kKs);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(series.channel("E_0")[i] == doctest::Approx(std::exp(-2.0 * traj.times[i])).epsilon(1e-9));
    CHECK(series.channel("P_par")[i] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("P_par stays at the eigenvalue along a single-mode run") {
  IntegratorSettings s;
  s.grid = {GridKind::Log, 100, 100.0};
  const auto traj = solve_parabolic_reparam(Spectrum{3.0}, PowerNonlinearity{1.5},
                                            PowerLawDissipation{0.3}, ModalVector{0.8}, s);
  const auto series = energy_suite(traj, Spectrum{3.0}, PowerNonlinearity{1.5}, 0.0, kKs);
  for (double v : series.channel("P_par")) CHECK(v == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("gram defect is nonnegative and P_eps dominates the Rayleigh quotient") {
  Lcg rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(8);
    const auto spec = testing::random_spectrum(rng, n, 0.1, 10.0);
    auto u = testing::random_vector(rng, n);
    auto up = testing::random_vector(rng, n);
    if (trial % 3 == 0) up = 2.5 * u;  // parallel case: defect vanishes
    CHECK(gram_defect(spec, u, up) >= 0.0);
    const auto series = energy_suite(single_sample(u, up), spec, PowerNonlinearity{1.0}, 0.01, kKs);
    const double rayleigh = sobolev_norm_sq(spec, u, 1.0) / sobolev_norm_sq(spec, u, 0.5);
    CHECK(series.channel("P_eps")[0] >= rayleigh);
    if (trial % 3 == 0) CHECK(gram_defect(spec, u, up) <= 1e-12 * sobolev_norm_sq(spec, u, 0.5) *
                                                              sobolev_norm_sq(spec, up, 0.5));
  }
}

TEST_CASE("all channels are invariant under a sign flip") {
  Lcg rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.index(5);
    const auto spec = testing::random_spectrum(rng, n, 0.1, 4.0);
    const auto u = testing::random_vector(rng, n);
    const auto up = testing::random_vector(rng, n);
    const TableNonlinearity table({{0.0, 0.5}, {1.0, 2.0}, {3.0, 1.0}});
    const auto a = energy_suite(single_sample(u, up), spec, table, 0.05, kKs);
    const auto b = energy_suite(single_sample(-u, -up), spec, table, 0.05, kKs);
    REQUIRE(a.channels.size() == b.channels.size());
    for (std::size_t c = 0; c < a.channels.size(); ++c)
      CHECK(a.channels[c].values[0] == doctest::Approx(b.channels[c].values[0]).epsilon(1e-14));
  }
}

TEST_CASE("discrete dissipation identities") {
  const Spectrum spec{1.0, 2.5};
  const PowerNonlinearity nl{1.0};
  const Dissipation dis = PowerLawDissipation{0.5};
  IntegratorSettings s;
  s.grid = {GridKind::Linear, 2001, 2.0};

  SUBCASE("hyperbolic Hamiltonian") {
    const double eps = 0.05;
    const auto traj = solve_hyperbolic(spec, nl, dis, eps, ModalVector{1.0, -0.5}, ModalVector{0.2, 0.0}, s);
    // |u'|^2 oscillates through zero, so compare against the largest rate
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i + 2 < traj.size(); i += 2) {
      const double h0 = hamiltonian(spec, nl, eps, traj.u[i], traj.uprime[i]);
      const double h2 = hamiltonian(spec, nl, eps, traj.u[i + 2], traj.uprime[i + 2]);
      const double dt = traj.times[i + 2] - traj.times[i];
      const double rate = -2.0 * damping(dis, traj.times[i + 1]) * sobolev_norm_sq(spec, traj.uprime[i + 1], 0.0);
      worst = std::max(worst, std::abs((h2 - h0) / dt - rate));
      scale = std::max(scale, std::abs(rate));
    }
    CHECK(worst < 1e-3 * scale);
  }
  SUBCASE("parabolic primitive") {
    const auto traj = solve_parabolic_reparam(spec, nl, dis, ModalVector{1.0, -0.5}, s);
    double worst = 0.0;
    for (std::size_t i = 0; i + 2 < traj.size(); i += 2) {
      const double m0 = eval_nonlinearity(nl, sobolev_norm_sq(spec, traj.u[i], 0.5)).M;
      const double m2 = eval_nonlinearity(nl, sobolev_norm_sq(spec, traj.u[i + 2], 0.5)).M;
      const double dt = traj.times[i + 2] - traj.times[i];
      const double rate = -2.0 * damping(dis, traj.times[i + 1]) * sobolev_norm_sq(spec, traj.uprime[i + 1], 0.0);
      worst = std::max(worst, std::abs((m2 - m0) / dt - rate) / std::abs(rate));
    }
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("a priori diagnostics") {
  SUBCASE("constant stiffness has vanishing basic lhs") {
    IntegratorSettings s;
    s.grid = {GridKind::Log, 50, 10.0};
    const auto traj = solve_hyperbolic(Spectrum{1.0, 2.0}, constant_nonlinearity(1.0), PowerLawDissipation{0.5},
                                       0.01, ModalVector{1.0, 1.0}, ModalVector{0.0, 0.0}, s);
    const auto samples = apriori_margin(traj, Spectrum{1.0, 2.0}, constant_nonlinearity(1.0),
                                        PowerLawDissipation{0.5}, 0.01);
    for (const auto& a : samples) CHECK(a.lhs_basic == 0.0);
    CHECK(satisfies_apriori_regime(samples, 0.01));
  }
  SUBCASE("power stiffness scales the reduced lhs by gamma") {
    const Spectrum spec{1.0, 3.0};
    const auto traj = single_sample(ModalVector{0.5, 0.2}, ModalVector{-0.3, 0.4});
    const auto a = apriori_margin(traj, spec, PowerNonlinearity{2.5}, PowerLawDissipation{0.0}, 0.1);
    CHECK(a[0].lhs_basic == doctest::Approx(2.5 * a[0].lhs_basicplus).epsilon(1e-13));
    CHECK(a[0].rhs == 1.0);
  }
  SUBCASE("reference coercive single mode run") {
    IntegratorSettings s;
    s.grid = {GridKind::Log, 300, 1000.0};
    const double eps = 1e-3;
    const auto traj = solve_hyperbolic(Spectrum{1.0}, PowerNonlinearity{1.0}, PowerLawDissipation{0.5}, eps,
                                       ModalVector{1.0}, ModalVector{0.0}, s);
    REQUIRE(traj.completed());
    const auto a = apriori_margin(traj, Spectrum{1.0}, PowerNonlinearity{1.0}, PowerLawDissipation{0.5}, eps);
    CHECK(satisfies_apriori_regime(a, eps));
  }
}
