#include "nwt/bundled_models.hpp"

#include <stdexcept>

namespace nwt {

namespace {

constexpr std::string_view kDecay = R"(# Monomolecular decay: A -> 0 at rate 0.1 per time unit.
compartment cell volume=1e-15
species A in cell count=1000
reaction R1: A -> @ @ 0.1
)";

constexpr std::string_view kTable2 = R"(# One molecule of A contested by a slow and a fast first-order reaction.
# As shipped, the system dies after the fast reaction fires once. Uncomment
# the feed to recycle B back into A; the slow reaction then resumes the
# remembered fraction of its wait on every resupply and eventually wins.
compartment cell volume=1e-15
species A in cell count=1
species B in cell count=0
species C in cell count=0
reaction R1: A -> C @ 0.2
reaction R2: A -> B @ 0.5
# reaction F: B -> A @ 0.25
)";

// Volume 1/N_A liters makes the bimolecular count-space constants equal the
// written rates.
constexpr std::string_view kLotka = R"(# Lotka-Volterra predator-prey network: P1 prey, P2 predator.
# Prey birth a = 10, predation b = 0.01, predator birth d = 0.01, predator
# death c = 10; the fixed point sits at P1 = P2 = 1000 and the run starts
# slightly off it so the orbit is visible.
compartment cell volume=1.6605388631270123e-24
species P1 in cell count=1200
species P2 in cell count=1000
reaction births: P1 -> P1 + P1 @ 10
reaction predation: P1 + P2 -> P2 @ 0.01
reaction predator_births: P1 + P2 -> P1 + P2 + P2 @ 0.01
reaction predator_deaths: P2 -> @ @ 10
)";

constexpr std::string_view kCircadian = R"(# Genetic oscillator with an activator A and a repressor R, after the
# Vilar-Kueh-Barkai-Leibler model (PNAS 2002), with the repressor decay in
# the regime where the rate equations damp to a steady state after one peak
# while discrete simulation keeps oscillating.
# First-order rates are per hour: alpha_A=50 alpha'_A=500 alpha_R=0.01
# alpha'_R=50 beta_A=50 beta_R=5 delta_MA=10 delta_MR=0.5 delta_A=1
# delta_R=0.05 theta_A=50 theta_R=100. The binding rates are written per
# molar per hour for the 1 fL cell and correspond to the per-molecule
# constants gamma_A=1, gamma_R=1 and gamma_C=2.
# Note: in some printed rate-equation forms of this model the bound
# activator-gene balance misstates its binding term (D'_R in place of D_A);
# this file encodes the reaction-network semantics, where activation
# consumes a free activator gene.
compartment cell volume=1e-15
species A in cell count=0
species R in cell count=0
species C in cell count=0
species D_A in cell count=1
species D'_A in cell count=0
species D_R in cell count=1
species D'_R in cell count=0
species M_A in cell count=0
species M_R in cell count=0
reaction activate_A_gene: D_A + A -> D'_A @ 602214150
reaction release_A_gene: D'_A -> D_A + A @ 50
reaction activate_R_gene: D_R + A -> D'_R @ 602214150
reaction release_R_gene: D'_R -> D_R + A @ 100
reaction transcribe_A: D_A -> D_A + M_A @ 50
reaction transcribe_A_active: D'_A -> D'_A + M_A @ 500
reaction transcribe_R: D_R -> D_R + M_R @ 0.01
reaction transcribe_R_active: D'_R -> D'_R + M_R @ 50
reaction translate_A: M_A -> M_A + A @ 50
reaction translate_R: M_R -> M_R + R @ 5
reaction degrade_M_A: M_A -> @ @ 10
reaction degrade_M_R: M_R -> @ @ 0.5
reaction degrade_A: A -> @ @ 1
reaction degrade_R: R -> @ @ 0.05
reaction bind_complex: A + R -> C @ 1204428300
reaction decay_in_complex: C -> R @ 1
)";

}  // namespace

const std::vector<BundledModel>& bundled_model_texts() {
  static const std::vector<BundledModel> models = {
      {"decay", kDecay},
      {"table2", kTable2},
      {"lotka", kLotka},
      {"circadian", kCircadian},
  };
  return models;
}

const BundledModel* find_bundled_model(std::string_view name) {
  for (const BundledModel& m : bundled_model_texts()) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

std::vector<ModelDocument> bundled_models() {
  std::vector<ModelDocument> docs;
  for (const BundledModel& m : bundled_model_texts()) {
    docs.push_back(parse_native_document(m.text, std::string(m.name)));
  }
  return docs;
}

std::string table2_with_feed_text() {
  std::string text(kTable2);
  const std::string disabled = "# reaction F:";
  const auto pos = text.find(disabled);
  if (pos == std::string::npos) {
    throw std::logic_error("table2 fixture lost its feed line");
  }
  text.replace(pos, disabled.size(), "reaction F:");
  return text;
}

}  // namespace nwt
