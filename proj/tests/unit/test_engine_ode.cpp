#include <doctest.h>

#include <cmath>

#include "nwt/bundled_models.hpp"
#include "nwt/engine_ode.hpp"
#include "nwt/ingest.hpp"
#include "nwt/recorder.hpp"
#include "nwt/rng.hpp"

using namespace nwt;

namespace {

MembraneSystem make(const std::string& text) { return parse_native(text); }

double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("derive_rates: decay gives dA/dt = -cA") {
  auto sys = make(
      "compartment cell volume=1e-15\n"
      "species A in cell count=100\n"
      "reaction R1: A -> @ @ 0.5\n");
  const RateSystem rates = derive_rates(sys);
  std::vector<double> y = {100.0}, dy(1);
  rates.derivative(y, dy);
  CHECK(dy[0] == doctest::Approx(-0.5 * 100.0));
  y[0] = 3.7;
  rates.derivative(y, dy);
  CHECK(dy[0] == doctest::Approx(-0.5 * 3.7));
}

TEST_CASE("derive_rates: lotka matches the hand-coded rate equations") {
  const BundledModel* m = find_bundled_model("lotka");
  REQUIRE(m);
  auto sys = parse_native(m->text);
  const RateSystem rates = derive_rates(sys);
  const double a = sys.reactions[0].const_discrete;
  const double b = sys.reactions[1].const_discrete;
  const double d = sys.reactions[2].const_discrete;
  const double c = sys.reactions[3].const_discrete;

  Rng rng(5);
  std::vector<double> y(2), dy(2);
  for (int i = 0; i < 100; ++i) {
    y[0] = rng.uniform01() * 2000.0;
    y[1] = rng.uniform01() * 2000.0;
    rates.derivative(y, dy);
    const double dP1 = y[0] * (a - b * y[1]);
    const double dP2 = -y[1] * (c - d * y[0]);
    CHECK(rel_err(dy[0], dP1) < 1e-12);
    CHECK(rel_err(dy[1], dP2) < 1e-12);
  }
}

TEST_CASE("derive_rates: circadian network matches its rate equations") {
  const BundledModel* m = find_bundled_model("circadian");
  REQUIRE(m);
  auto sys = parse_native(m->text);
  const RateSystem rates = derive_rates(sys);

  const auto idx = [&sys](const char* id) {
    const int s = sys.find_species(id);
    REQUIRE(s >= 0);
    return static_cast<std::size_t>(s);
  };
  const std::size_t A = idx("A"), R = idx("R"), C = idx("C");
  const std::size_t DA = idx("D_A"), DAp = idx("D'_A");
  const std::size_t DR = idx("D_R"), DRp = idx("D'_R");
  const std::size_t MA = idx("M_A"), MR = idx("M_R");

  const double alphaA = 50, alphaAp = 500, alphaR = 0.01, alphaRp = 50;
  const double betaA = 50, betaR = 5, deltaMA = 10, deltaMR = 0.5;
  const double deltaA = 1, deltaR = 0.05, gammaA = 1, gammaR = 1, gammaC = 2;
  const double thetaA = 50, thetaR = 100;

  Rng rng(6);
  std::vector<double> y(9), dy(9), expect(9);
  for (int i = 0; i < 100; ++i) {
    for (auto& v : y) v = rng.uniform01() * 100.0;
    rates.derivative(y, dy);

    expect[DA] = thetaA * y[DAp] - gammaA * y[DA] * y[A];
    expect[DR] = thetaR * y[DRp] - gammaR * y[DR] * y[A];
    // Activation consumes a free activator gene (the bound-gene balance in
    // some printed forms of this model misstates this term).
    expect[DAp] = gammaA * y[DA] * y[A] - thetaA * y[DAp];
    expect[DRp] = gammaR * y[DR] * y[A] - thetaR * y[DRp];
    expect[MA] = alphaAp * y[DAp] + alphaA * y[DA] - deltaMA * y[MA];
    expect[A] = betaA * y[MA] + thetaA * y[DAp] + thetaR * y[DRp] -
                y[A] * (gammaA * y[DA] + gammaR * y[DR] + gammaC * y[R] + deltaA);
    expect[MR] = alphaRp * y[DRp] + alphaR * y[DR] - deltaMR * y[MR];
    expect[R] = betaR * y[MR] - gammaC * y[A] * y[R] + deltaA * y[C] - deltaR * y[R];
    expect[C] = gammaC * y[A] * y[R] - deltaA * y[C];

    for (std::size_t s = 0; s < 9; ++s) {
      CHECK(rel_err(dy[s], expect[s]) < 1e-12);
    }
  }
}

TEST_CASE("rk4 step: zero field leaves the state alone") {
  RateSystem rates;
  rates.n_species = 2;
  Rk4Integrator integrator(rates);
  std::vector<double> y = {3.0, 4.0};
  integrator.step(y, 0.0, 0.1);
  CHECK(y == std::vector<double>{3.0, 4.0});
}

TEST_CASE("rk4 step: classical tableau on dy/dt = -y") {
  auto sys = make(
      "compartment cell volume=1e-15\n"
      "species A in cell count=1\n"
      "reaction R1: A -> @ @ 1.0\n");
  Rk4Integrator integrator(derive_rates(sys));
  std::vector<double> y = {1.0};
  integrator.step(y, 0.0, 0.1);
  CHECK(y[0] == doctest::Approx(0.9048375).epsilon(1e-12));
  CHECK(std::abs(y[0] - std::exp(-0.1)) < 1e-7);
}

TEST_CASE("halving the step cuts the global error about 16x") {
  auto sys = make(
      "compartment cell volume=1e-15\n"
      "species A in cell count=1000\n"
      "reaction R1: A -> @ @ 0.5\n");
  const double t_end = 2.0;
  const double exact = 1000.0 * std::exp(-0.5 * t_end);
  const auto error_at = [&](double h) {
    Rk4Integrator integrator(derive_rates(sys));
    std::vector<double> y = {1000.0};
    integrator.integrate(y, 0.0, t_end, h);
    return std::abs(y[0] - exact);
  };
  const double e1 = error_at(0.1);
  const double e2 = error_at(0.05);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("closed loop conserves the total over many steps") {
  auto sys = make(
      "compartment cell volume=1e-15\n"
      "species A in cell count=600\n"
      "species B in cell count=400\n"
      "reaction f: A -> B @ 1.0\n"
      "reaction b: B -> A @ 2.0\n");
  Rk4Integrator integrator(derive_rates(sys));
  std::vector<double> y = {600.0, 400.0};
  for (int k = 0; k < 100000; ++k) {
    integrator.step(y, k * 0.001, 0.001);
  }
  CHECK(std::abs(y[0] + y[1] - 1000.0) / 1000.0 < 1e-9);
}

TEST_CASE("negative excursions clamp to zero and are counted") {
  // A constant sink (no reactant coordinate) drives y straight through zero.
  RateSystem rates;
  rates.n_species = 1;
  RateSystem::Term sink;
  sink.c = 1.0;
  sink.stoich = {{0, -1}};
  rates.terms.push_back(sink);
  Rk4Integrator integrator(rates);
  std::vector<double> y = {0.05};
  integrator.integrate(y, 0.0, 1.0, 0.1);
  CHECK(y[0] == 0.0);
  CHECK(integrator.negative_clamps() > 0);
}

TEST_CASE("run_ode: decay matches the closed form to 1e-6 relative") {
  auto sys = make(
      "compartment cell volume=1e-15\n"
      "species A in cell count=1000\n"
      "reaction R1: A -> @ @ 0.5\n");
  Recorder rec({"A"}, 1.0, 10.0, /*integer_values=*/false);
  const RunStats stats = run_ode(sys, 10.0, 0.01, rec);
  CHECK(stats.termination == Termination::completed);
  const auto& series = rec.trajectory().series[0];
  REQUIRE(series.size() == 11);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double exact = 1000.0 * std::exp(-0.5 * static_cast<double>(k));
    CHECK(rel_err(series[k], exact) < 1e-6);
  }
}

TEST_CASE("run_ode: explosive growth ends as diverged") {
  // A + A -> A + A + A gives dA/dt = cA^2, finite-time blow-up.
  auto sys = make(
      "compartment cell volume=1.6605388631270123e-24\n"
      "species A in cell count=1000\n"
      "reaction boom: A + A -> A + A + A @ 1.0\n");
  Recorder rec({"A"}, 1.0, 100.0, false);
  const RunStats stats = run_ode(sys, 100.0, 0.01, rec);
  CHECK(stats.termination == Termination::diverged);
}

TEST_CASE("run_ode: lotka orbits do not damp to rest") {
  const BundledModel* m = find_bundled_model("lotka");
  auto sys = parse_native(m->text);
  // Start off the fixed point to get a visible orbit.
  sys.alphabet[0].initial_count = 1200;
  Recorder rec({"P1", "P2"}, 0.01, 3.0, false);
  const RunStats stats = run_ode(sys, 3.0, 0.001, rec);
  CHECK(stats.termination == Termination::completed);
  const auto& prey = rec.trajectory().series[0];
  // The orbit keeps returning: the late-window amplitude stays comparable
  // to the early one instead of shrinking toward the fixed point.
  const std::size_t n = prey.size();
  double early_lo = 1e18, early_hi = -1e18, late_lo = 1e18, late_hi = -1e18;
  for (std::size_t k = 0; k < n / 3; ++k) {
    early_lo = std::min(early_lo, prey[k]);
    early_hi = std::max(early_hi, prey[k]);
  }
  for (std::size_t k = 2 * n / 3; k < n; ++k) {
    late_lo = std::min(late_lo, prey[k]);
    late_hi = std::max(late_hi, prey[k]);
  }
  CHECK(late_hi - late_lo > 0.5 * (early_hi - early_lo));
  for (double v : prey) CHECK(v > 0.0);
}
