#ifndef NWT_ENGINE_SSA_HPP
#define NWT_ENGINE_SSA_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "nwt/model.hpp"
#include "nwt/recorder.hpp"
#include "nwt/rng.hpp"

namespace nwt {

/// Stochastic propensity a = c * h, where h counts the distinct reactant
/// combinations: |A| for one reactant, |A|*|B| for two distinct species,
/// |A|*(|A|-1)/2 for a doubled reactant, and so on.
double propensity(const Reaction& reaction, std::span<const std::int64_t> counts);

/// Gillespie direct-method reference engine. Every step draws an exponential
/// waiting time from the total propensity and a propensity-weighted reaction
/// choice, so every applied rule counts as a nondeterministic decision.
class SsaEngine {
 public:
  SsaEngine(const MembraneSystem& system, double tau_fin, std::uint64_t seed);

  /// Advances by one reaction event. Returns false once the horizon is
  /// crossed or the total propensity reaches zero (exhaustion).
  bool step(Recorder* recorder = nullptr);

  RunStats run(Recorder* recorder = nullptr);

  double tau() const { return tau_; }
  bool exhausted() const { return exhausted_; }
  std::span<const std::int64_t> counts() const { return counts_; }
  std::uint64_t applied_rule_count() const { return applied_rule_count_; }

  /// Sum of all reaction propensities at the current state.
  double total_propensity() const;

 private:
  const MembraneSystem& system_;
  std::vector<std::int64_t> counts_;
  std::vector<double> propensity_scratch_;
  double tau_ = 0.0;
  double tau_fin_;
  Rng rng_;
  bool exhausted_ = false;
  std::uint64_t applied_rule_count_ = 0;
};

}  // namespace nwt

#endif  // NWT_ENGINE_SSA_HPP
