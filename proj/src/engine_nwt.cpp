#include "nwt/engine_nwt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace nwt {

double mass_action_duration(const Reaction& reaction,
                            std::span<const std::int64_t> counts) {
  double product = reaction.const_discrete;
  const auto& slots = reaction.reactants;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    // A repeated reactant consumes distinct molecules: the k-th occurrence
    // of the same species contributes (count - k).
    std::int64_t prior = 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (slots[j] == slots[i]) ++prior;
    }
    const std::int64_t factor = counts[slots[i]] - prior;
    if (factor <= 0) return std::numeric_limits<double>::infinity();
    product *= static_cast<double>(factor);
  }
  return 1.0 / product;
}

std::vector<SimTime> NwtEngine::initial_schedule(const MembraneSystem& system) {
  std::vector<std::int64_t> counts(system.alphabet.size());
  for (std::size_t s = 0; s < counts.size(); ++s) {
    counts[s] = system.alphabet[s].initial_count;
  }
  std::vector<SimTime> keys(system.reactions.size());
  for (std::size_t r = 0; r < keys.size(); ++r) {
    keys[r] = SimTime{}.plus(mass_action_duration(system.reactions[r], counts));
  }
  return keys;
}

NwtEngine::NwtEngine(const MembraneSystem& system, double tau_fin,
                     std::uint64_t seed)
    : NwtEngine(system, tau_fin, seed, Options()) {}

NwtEngine::NwtEngine(const MembraneSystem& system, double tau_fin,
                     std::uint64_t seed, Options options)
    : system_(system),
      heap_(initial_schedule(system)),
      tau_fin_(tau_fin),
      rng_(seed),
      options_(options) {
  if (!(tau_fin > 0.0)) {
    throw std::invalid_argument("simulation end time must be positive");
  }
  counts_.resize(system.alphabet.size());
  for (std::size_t s = 0; s < counts_.size(); ++s) {
    counts_[s] = system.alphabet[s].initial_count;
  }
  anchor_.assign(system.reactions.size(), SimTime{});
  mem_.assign(system.reactions.size(), 1.0);
  demand_.assign(counts_.size(), 0);
  species_mark_.assign(counts_.size(), 0);
  reaction_mark_.assign(system.reactions.size(), 0);
  applied_mark_.assign(system.reactions.size(), 0);
}

bool NwtEngine::sufficient(const Reaction& rx) const {
  // Each slot must be covered by a distinct molecule, so the k-th occurrence
  // of a species raises its requirement to k.
  for (std::size_t i = 0; i < rx.reactants.size(); ++i) {
    std::int64_t need = 1;
    for (std::size_t j = 0; j < i; ++j) {
      if (rx.reactants[j] == rx.reactants[i]) ++need;
    }
    if (counts_[rx.reactants[i]] < need) return false;
  }
  return true;
}

void NwtEngine::apply_counts(const Reaction& rx) {
  for (int s : rx.reactants) --counts_[s];
  for (int s : rx.products) ++counts_[s];
  ++applied_rule_count_;
}

void NwtEngine::resolve_ties(std::span<const int> ties, std::vector<int>& applied,
                             std::vector<int>& skipped) {
  if (ties.size() == 1) {
    const int r = ties.front();
    apply_counts(system_.reactions[r]);
    applied.push_back(r);
    return;
  }

  // If the pooled demand of every tied reaction is covered, all of them fire
  // and no random choice is involved.
  touched_species_.clear();
  for (int r : ties) {
    for (int s : system_.reactions[r].reactants) {
      if (demand_[s] == 0) touched_species_.push_back(s);
      ++demand_[s];
    }
  }
  bool all_fit = true;
  for (int s : touched_species_) {
    if (demand_[s] > counts_[s]) all_fit = false;
    demand_[s] = 0;
  }
  if (all_fit) {
    for (int r : ties) {
      apply_counts(system_.reactions[r]);
      applied.push_back(r);
    }
    return;
  }

  // Scarcity: draw a uniform index into the remaining ties, fire the drawn
  // reaction if its reactants still suffice, drop it from the array either
  // way. Every draw is one nondeterministic decision; a single remaining
  // entry needs no draw.
  pool_.assign(ties.begin(), ties.end());
  while (!pool_.empty()) {
    std::size_t idx = 0;
    if (pool_.size() > 1) {
      idx = static_cast<std::size_t>(rng_.uniform_below(pool_.size()));
      ++nondet_decision_count_;
    }
    const int r = pool_[idx];
    if (sufficient(system_.reactions[r])) {
      apply_counts(system_.reactions[r]);
      applied.push_back(r);
    } else {
      skipped.push_back(r);
    }
    pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(idx));
  }
}

void NwtEngine::reschedule_after(std::span<const int> applied,
                                 std::span<const int> skipped) {
  ++epoch_;
  affected_.clear();

  const auto mark_reaction = [this](int r) {
    if (reaction_mark_[r] != epoch_) {
      reaction_mark_[r] = epoch_;
      affected_.push_back(r);
    }
  };
  const auto mark_species = [this, &mark_reaction](int s) {
    if (species_mark_[s] != epoch_) {
      species_mark_[s] = epoch_;
      for (int r : system_.alphabet[s].consuming_reactions) mark_reaction(r);
    }
  };

  for (int r : applied) {
    applied_mark_[r] = epoch_;
    mark_reaction(r);
    for (int s : system_.reactions[r].reactants) mark_species(s);
    for (int s : system_.reactions[r].products) mark_species(s);
  }
  for (int r : skipped) mark_reaction(r);
  std::sort(affected_.begin(), affected_.end());

  for (int r : affected_) {
    const SimTime old_time = heap_.key_of(r);
    const double base = mass_action_duration(system_.reactions[r], counts_);

    if (applied_mark_[r] == epoch_) {
      // A firing consumes any stored memory; the reaction restarts its full
      // waiting time from now.
      mem_[r] = 1.0;
      if (std::isinf(base)) {
        heap_.update_key(r, SimTime::infinity());
      } else {
        anchor_[r] = tau_;
        heap_.update_key(r, tau_.plus(base));
      }
      continue;
    }

    if (std::isinf(base)) {
      if (!old_time.infinite()) {
        // Reactants ran out mid-wait: remember the fraction of the wait
        // still outstanding.
        if (options_.memory_enabled) {
          const double span = old_time.minus(anchor_[r]);
          mem_[r] = span > 0.0
                        ? std::clamp(old_time.minus(tau_) / span, 0.0, 1.0)
                        : 0.0;
        }
        heap_.update_key(r, SimTime::infinity());
      }
      continue;
    }

    if (old_time.infinite()) {
      // Reactants are back: wait the remembered fraction of a fresh
      // mass-action duration.
      const double fraction = options_.memory_enabled ? mem_[r] : 1.0;
      anchor_[r] = tau_;
      heap_.update_key(r, tau_.plus(fraction * base));
      continue;
    }

    // Both finite: keep the smaller of the standing schedule and the fresh
    // candidate. The anchor moves only when the schedule does.
    const SimTime candidate = tau_.plus(base);
    if (candidate < old_time) {
      anchor_[r] = tau_;
      heap_.update_key(r, candidate);
    }
  }
}

bool NwtEngine::advance(Recorder* recorder) {
  applied_scratch_.clear();
  skipped_scratch_.clear();

  const auto [min_reaction, min_time] = heap_.peek_min();
  (void)min_reaction;
  if (min_time.infinite()) {
    exhausted_ = true;
    return false;
  }
  if (min_time.value() > tau_fin_) {
    tau_ = SimTime{}.plus(tau_fin_);
    return false;
  }

  heap_.collect_min_ties(ties_);
  if (recorder) recorder->observe_event(min_time.value(), counts_);
  tau_ = min_time;
  resolve_ties(ties_, applied_scratch_, skipped_scratch_);
  reschedule_after(applied_scratch_, skipped_scratch_);
  return true;
}

NwtEngine::StepResult NwtEngine::step() {
  StepResult result;
  result.progressed = advance(nullptr);
  result.tau = tau_.value();
  result.applied = applied_scratch_;
  result.skipped = skipped_scratch_;
  return result;
}

RunStats NwtEngine::run(Recorder* recorder) {
  const auto start = std::chrono::steady_clock::now();
  RunStats stats;

  while (tau_.value() < tau_fin_ && advance(recorder)) {
  }

  if (recorder) {
    recorder->finish(counts_);
    stats.extinction_times = extinction_times(recorder->trajectory());
  }
  stats.applied_rule_count = applied_rule_count_;
  stats.nondet_decision_count = nondet_decision_count_;
  stats.termination = exhausted_ ? Termination::exhausted : Termination::completed;
  stats.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

}  // namespace nwt
