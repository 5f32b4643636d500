#ifndef NWT_ENGINE_ODE_HPP
#define NWT_ENGINE_ODE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "nwt/model.hpp"
#include "nwt/recorder.hpp"

namespace nwt {

/// Mass-action rate equations generated from a reaction network, in molecule
/// count units so the solution overlays the stochastic trajectories directly.
/// Each reaction contributes the velocity c * prod(reactant coordinates),
/// with a repeated reactant entering as its coordinate squared (or cubed).
struct RateSystem {
  struct Term {
    double c = 0.0;
    int slots[3] = {-1, -1, -1};  // species coordinates, -1 = unused
    std::vector<std::pair<int, int>> stoich;  // (species, net change)
  };

  int n_species = 0;
  std::vector<Term> terms;  // one per reaction

  /// dy/dt at the given state; dy must have n_species entries.
  void derivative(std::span<const double> y, std::span<double> dy) const;
};

RateSystem derive_rates(const MembraneSystem& system);

/// Classical fixed-step fourth-order Runge-Kutta over a RateSystem.
class Rk4Integrator {
 public:
  explicit Rk4Integrator(RateSystem rates);

  const RateSystem& rates() const { return rates_; }

  /// One classical four-stage step. Throws IntegrationDiverged if the new
  /// state is not finite.
  void step(std::vector<double>& y, double t, double h);

  /// Integrates from t0 to t1 with steps of at most h (the step is shrunk
  /// to land exactly on t1). Negative coordinates are clamped to zero after
  /// each step; the number of clamped components is accumulated.
  void integrate(std::vector<double>& y, double t0, double t1, double h);

  std::uint64_t negative_clamps() const { return negative_clamps_; }

 private:
  RateSystem rates_;
  std::vector<double> k1_, k2_, k3_, k4_, mid_;
  std::uint64_t negative_clamps_ = 0;
};

class IntegrationDiverged : public std::runtime_error {
 public:
  explicit IntegrationDiverged(double t);
  double t() const { return t_; }

 private:
  double t_;
};

/// Deterministic reference run: integrates the generated rate equations from
/// the model's initial counts, recording every grid point. A divergent state
/// ends the run early with Termination::diverged.
RunStats run_ode(const MembraneSystem& system, double t_fin, double step_h,
                 Recorder& recorder);

}  // namespace nwt

#endif  // NWT_ENGINE_ODE_HPP
