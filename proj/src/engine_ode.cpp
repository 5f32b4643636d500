#include "nwt/engine_ode.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "text_util.hpp"

namespace nwt {

void RateSystem::derivative(std::span<const double> y, std::span<double> dy) const {
  for (int s = 0; s < n_species; ++s) dy[s] = 0.0;
  for (const Term& term : terms) {
    double v = term.c;
    for (int slot : term.slots) {
      if (slot < 0) break;
      v *= y[slot];
    }
    for (const auto& [species, net] : term.stoich) {
      dy[species] += static_cast<double>(net) * v;
    }
  }
}

RateSystem derive_rates(const MembraneSystem& system) {
  RateSystem rates;
  rates.n_species = static_cast<int>(system.alphabet.size());
  rates.terms.reserve(system.reactions.size());
  for (const Reaction& rx : system.reactions) {
    RateSystem::Term term;
    term.c = rx.const_discrete;
    for (std::size_t i = 0; i < rx.reactants.size(); ++i) {
      term.slots[i] = rx.reactants[i];
    }
    std::map<int, int> net;
    for (int s : rx.reactants) --net[s];
    for (int s : rx.products) ++net[s];
    for (const auto& [species, change] : net) {
      if (change != 0) term.stoich.emplace_back(species, change);
    }
    rates.terms.push_back(std::move(term));
  }
  return rates;
}

IntegrationDiverged::IntegrationDiverged(double t)
    : std::runtime_error("ODE integration diverged at t=" + detail::format_double(t)),
      t_(t) {}

Rk4Integrator::Rk4Integrator(RateSystem rates) : rates_(std::move(rates)) {
  const std::size_t n = static_cast<std::size_t>(rates_.n_species);
  k1_.resize(n);
  k2_.resize(n);
  k3_.resize(n);
  k4_.resize(n);
  mid_.resize(n);
}

void Rk4Integrator::step(std::vector<double>& y, double t, double h) {
  const std::size_t n = y.size();

  rates_.derivative(y, k1_);
  for (std::size_t i = 0; i < n; ++i) mid_[i] = y[i] + 0.5 * h * k1_[i];
  rates_.derivative(mid_, k2_);
  for (std::size_t i = 0; i < n; ++i) mid_[i] = y[i] + 0.5 * h * k2_[i];
  rates_.derivative(mid_, k3_);
  for (std::size_t i = 0; i < n; ++i) mid_[i] = y[i] + h * k3_[i];
  rates_.derivative(mid_, k4_);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += h / 6.0 * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(y[i])) throw IntegrationDiverged(t + h);
  }
}

void Rk4Integrator::integrate(std::vector<double>& y, double t0, double t1,
                              double h) {
  if (t1 <= t0) return;
  const auto steps = static_cast<long long>(std::ceil((t1 - t0) / h - 1e-9));
  const long long n = steps < 1 ? 1 : steps;
  const double h_eff = (t1 - t0) / static_cast<double>(n);
  for (long long k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * h_eff;
    step(y, t, h_eff);
    for (double& v : y) {
      // Stiff parameter sets can undershoot; freeze at zero and note it.
      if (v < 0.0) {
        v = 0.0;
        ++negative_clamps_;
      }
    }
  }
}

RunStats run_ode(const MembraneSystem& system, double t_fin, double step_h,
                 Recorder& recorder) {
  const auto start = std::chrono::steady_clock::now();
  if (!(step_h > 0.0)) {
    throw std::invalid_argument("ODE step size must be positive");
  }

  Rk4Integrator integrator(derive_rates(system));
  std::vector<double> y(system.alphabet.size());
  for (std::size_t s = 0; s < y.size(); ++s) {
    y[s] = static_cast<double>(system.alphabet[s].initial_count);
  }

  RunStats stats;
  recorder.record_grid_point(y);
  const std::size_t total = recorder.total_grid_points();
  const double interval = recorder.trajectory().interval;
  try {
    for (std::size_t k = 1; k < total; ++k) {
      const double t_prev = static_cast<double>(k - 1) * interval;
      const double t_here = static_cast<double>(k) * interval;
      integrator.integrate(y, t_prev, t_here, step_h);
      recorder.record_grid_point(y);
    }
    // The grid ends at floor(t_fin/interval); finish the tail of the span.
    const double t_grid_end = static_cast<double>(total - 1) * interval;
    if (t_grid_end < t_fin) {
      integrator.integrate(y, t_grid_end, t_fin, step_h);
    }
    stats.termination = Termination::completed;
  } catch (const IntegrationDiverged&) {
    stats.termination = Termination::diverged;
  }
  recorder.finish_partial();

  stats.negative_clamps = integrator.negative_clamps();
  stats.extinction_times = extinction_times(recorder.trajectory());
  stats.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

}  // namespace nwt
