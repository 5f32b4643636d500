#ifndef NWT_ENGINE_NWT_HPP
#define NWT_ENGINE_NWT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "nwt/model.hpp"
#include "nwt/recorder.hpp"
#include "nwt/rng.hpp"
#include "nwt/schedule_heap.hpp"
#include "nwt/sim_time.hpp"

namespace nwt {

/// Duration until the next single firing of a reaction under the law of mass
/// action: 1 / (c * |A|) for one reactant, 1 / (c * |A| * |B|) for two, and
/// so on. A reactant listed twice contributes a falling factorial
/// (|A| * (|A|-1)). Any non-positive factor yields +infinity.
double mass_action_duration(const Reaction& reaction,
                            std::span<const std::int64_t> counts);

/// Nondeterministic waiting-time engine. Each reaction carries an absolute
/// scheduled firing time in an indexed min-heap; stepping fires the earliest
/// reaction(s), updates multiplicities, reschedules the dependents by the
/// keep-the-smaller rule and applies the memory adjustment on transitions to
/// and from infinity. Competing reactions tied at the same instant are
/// resolved by uniform random draws only when reactants are scarce; that is
/// the sole source of nondeterminism. Times are compensated double pairs so
/// that ties mean equal schedules, not coarse-clock collisions.
class NwtEngine {
 public:
  struct Options {
    // Test switch: with memory off, a reaction returning from infinity
    // restarts its full waiting time instead of the remembered fraction.
    bool memory_enabled = true;
  };

  NwtEngine(const MembraneSystem& system, double tau_fin, std::uint64_t seed);
  NwtEngine(const MembraneSystem& system, double tau_fin, std::uint64_t seed,
            Options options);

  struct StepResult {
    bool progressed = false;  // false: horizon reached or system exhausted
    double tau = 0.0;         // simulation time after the step
    std::vector<int> applied;
    std::vector<int> skipped;  // ties that lost the scarcity draws
  };

  /// Fires the earliest scheduled reaction(s). When the next event lies
  /// beyond tau_fin the clock advances to tau_fin and nothing fires; when
  /// every reaction is at +infinity the engine reports exhaustion.
  StepResult step();

  /// Runs to tau_fin (or exhaustion), sampling through the recorder if one
  /// is given. Fills the extinction times and wall-clock duration.
  RunStats run(Recorder* recorder = nullptr);

  /// Tie resolution, exposed for direct testing: applies every tied reaction
  /// if reactants suffice for all simultaneously, otherwise draws uniformly
  /// from the remaining ties, applying or skipping each drawn reaction by
  /// current sufficiency. Appends to applied/skipped; does not reschedule.
  void resolve_ties(std::span<const int> ties, std::vector<int>& applied,
                    std::vector<int>& skipped);

  double tau() const { return tau_.value(); }
  SimTime tau_time() const { return tau_; }
  double tau_fin() const { return tau_fin_; }
  bool exhausted() const { return exhausted_; }
  std::span<const std::int64_t> counts() const { return counts_; }
  double scheduled_time(int reaction) const { return heap_.key_of(reaction).value(); }
  SimTime scheduled_exact(int reaction) const { return heap_.key_of(reaction); }
  double anchor_time(int reaction) const { return anchor_[reaction].value(); }
  double mem_fraction(int reaction) const { return mem_[reaction]; }
  std::uint64_t applied_rule_count() const { return applied_rule_count_; }
  std::uint64_t nondet_decision_count() const { return nondet_decision_count_; }
  const BasicScheduleHeap<SimTime>& heap() const { return heap_; }

 private:
  bool sufficient(const Reaction& rx) const;
  void apply_counts(const Reaction& rx);
  void reschedule_after(std::span<const int> applied, std::span<const int> skipped);
  bool advance(Recorder* recorder);

  const MembraneSystem& system_;
  std::vector<std::int64_t> counts_;
  std::vector<SimTime> anchor_;  // per reaction: time the schedule was last set
  std::vector<double> mem_;      // per reaction: fraction of wait remaining
  BasicScheduleHeap<SimTime> heap_;
  SimTime tau_;
  double tau_fin_;
  Rng rng_;
  Options options_;
  bool exhausted_ = false;
  std::uint64_t applied_rule_count_ = 0;
  std::uint64_t nondet_decision_count_ = 0;

  // Scratch reused across steps.
  std::vector<int> ties_, applied_scratch_, skipped_scratch_, affected_, pool_;
  std::vector<std::int64_t> demand_;
  std::vector<int> touched_species_;
  std::vector<unsigned> species_mark_, reaction_mark_, applied_mark_;
  unsigned epoch_ = 0;

  static std::vector<SimTime> initial_schedule(const MembraneSystem& system);
};

}  // namespace nwt

#endif  // NWT_ENGINE_NWT_HPP
