#include "nwt/engine_ssa.hpp"

#include <chrono>
#include <stdexcept>

namespace nwt {

double propensity(const Reaction& reaction, std::span<const std::int64_t> counts) {
  double h = 1.0;
  const auto& slots = reaction.reactants;
  std::int64_t divisor = 1;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    std::int64_t prior = 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (slots[j] == slots[i]) ++prior;
    }
    const std::int64_t available = counts[slots[i]] - prior;
    if (available <= 0) return 0.0;
    h *= static_cast<double>(available);
    divisor *= prior + 1;  // r identical slots divide by r!
  }
  return reaction.const_discrete * h / static_cast<double>(divisor);
}

SsaEngine::SsaEngine(const MembraneSystem& system, double tau_fin,
                     std::uint64_t seed)
    : system_(system), tau_fin_(tau_fin), rng_(seed) {
  if (!(tau_fin > 0.0)) {
    throw std::invalid_argument("simulation end time must be positive");
  }
  counts_.resize(system.alphabet.size());
  for (std::size_t s = 0; s < counts_.size(); ++s) {
    counts_[s] = system.alphabet[s].initial_count;
  }
  propensity_scratch_.resize(system.reactions.size());
}

double SsaEngine::total_propensity() const {
  double total = 0.0;
  for (const Reaction& rx : system_.reactions) {
    total += propensity(rx, counts_);
  }
  return total;
}

bool SsaEngine::step(Recorder* recorder) {
  double total = 0.0;
  for (std::size_t r = 0; r < system_.reactions.size(); ++r) {
    propensity_scratch_[r] = propensity(system_.reactions[r], counts_);
    total += propensity_scratch_[r];
  }
  if (total <= 0.0) {
    exhausted_ = true;
    return false;
  }

  // One uniform draw for the time advance, one for the reaction choice.
  const double dt = rng_.exponential(total);
  const double t_next = tau_ + dt;
  if (t_next > tau_fin_) {
    tau_ = tau_fin_;
    return false;
  }
  const double target = rng_.uniform01() * total;

  std::size_t chosen = propensity_scratch_.size();
  double cumulative = 0.0;
  for (std::size_t r = 0; r < propensity_scratch_.size(); ++r) {
    cumulative += propensity_scratch_[r];
    if (target < cumulative) {
      chosen = r;
      break;
    }
  }
  if (chosen == propensity_scratch_.size()) {
    // Rounding in the cumulative sum left the target just past the end;
    // take the last reaction that can fire.
    for (std::size_t r = propensity_scratch_.size(); r-- > 0;) {
      if (propensity_scratch_[r] > 0.0) {
        chosen = r;
        break;
      }
    }
  }

  if (recorder) recorder->observe_event(t_next, counts_);
  tau_ = t_next;
  const Reaction& rx = system_.reactions[chosen];
  for (int s : rx.reactants) --counts_[s];
  for (int s : rx.products) ++counts_[s];
  ++applied_rule_count_;
  return true;
}

RunStats SsaEngine::run(Recorder* recorder) {
  const auto start = std::chrono::steady_clock::now();
  RunStats stats;

  while (tau_ < tau_fin_ && step(recorder)) {
  }

  if (recorder) {
    recorder->finish(counts_);
    stats.extinction_times = extinction_times(recorder->trajectory());
  }
  stats.applied_rule_count = applied_rule_count_;
  stats.nondet_decision_count = applied_rule_count_;  // every step is a draw
  stats.termination = exhausted_ ? Termination::exhausted : Termination::completed;
  stats.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

}  // namespace nwt
