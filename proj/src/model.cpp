#include "nwt/model.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace nwt {

namespace {

std::string join_report(const std::vector<Violation>& report) {
  std::ostringstream os;
  os << "model validation failed (" << report.size() << " violation"
     << (report.size() == 1 ? "" : "s") << "):";
  for (const auto& v : report) {
    os << "\n  [" << v.subject << "] " << v.message;
  }
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> report)
    : std::runtime_error(join_report(report)), report_(std::move(report)) {}

int MembraneSystem::find_compartment(std::string_view id) const {
  for (std::size_t i = 0; i < compartments.size(); ++i) {
    if (compartments[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int MembraneSystem::find_species(std::string_view id) const {
  int found = -1;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (alphabet[i].id == id) {
      if (found >= 0) return -2;
      found = static_cast<int>(i);
    }
  }
  return found;
}

int MembraneSystem::find_species_in(std::string_view compartment_id,
                                    std::string_view id) const {
  const int c = find_compartment(compartment_id);
  if (c < 0) return -1;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (alphabet[i].compartment == c && alphabet[i].id == id) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

int MembraneSystem::find_reaction(std::string_view id) const {
  for (std::size_t i = 0; i < reactions.size(); ++i) {
    if (reactions[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

double discrete_constant(double k_conc, double volume_liters, int order) {
  if (!(k_conc > 0.0)) {
    throw std::invalid_argument("rate constant must be positive");
  }
  if (!(volume_liters > 0.0)) {
    throw std::invalid_argument("compartment volume must be positive");
  }
  if (order < 1 || order > kMaxOrder) {
    throw std::invalid_argument("reaction order must be 1, 2 or 3");
  }
  const double divisor = std::pow(volume_liters, order - 1) *
                         std::pow(kAvogadro, order - 1);
  return k_conc / divisor;
}

std::int64_t concentration_to_count(double conc_molar, double volume_liters) {
  if (conc_molar < 0.0 || !std::isfinite(conc_molar)) {
    throw std::invalid_argument("concentration must be finite and non-negative");
  }
  if (!(volume_liters > 0.0)) {
    throw std::invalid_argument("compartment volume must be positive");
  }
  const double molecules = conc_molar * volume_liters * kAvogadro;
  if (molecules > 9.2e18) {
    throw std::invalid_argument("molecule count overflows a 64-bit integer");
  }
  return std::llround(molecules);  // rounds halfway cases away from zero
}

std::vector<Violation> validate(const MembraneSystem& system) {
  std::vector<Violation> report;
  const auto flag = [&report](const std::string& subject, std::string message) {
    report.push_back({subject, std::move(message)});
  };

  const int ncomp = static_cast<int>(system.compartments.size());
  const int nspec = static_cast<int>(system.alphabet.size());
  const int nreac = static_cast<int>(system.reactions.size());

  // Compartments: positive volumes, parents forming a tree with one root.
  int roots = 0;
  for (int c = 0; c < ncomp; ++c) {
    const Compartment& comp = system.compartments[c];
    if (!(comp.volume_liters > 0.0)) {
      flag(comp.id, "compartment volume must be positive");
    }
    if (comp.parent == -1) {
      ++roots;
    } else if (comp.parent < 0 || comp.parent >= ncomp) {
      flag(comp.id, "parent compartment does not resolve");
    } else if (comp.parent == c) {
      flag(comp.id, "compartment cannot be its own parent");
    }
    for (int d = c + 1; d < ncomp; ++d) {
      if (system.compartments[d].id == comp.id) {
        flag(comp.id, "duplicate compartment id");
      }
    }
  }
  if (ncomp > 0 && roots != 1) {
    flag("<hierarchy>", "compartment hierarchy must have exactly one root, found " +
                            std::to_string(roots));
  }
  // Cycle check: walk each parent chain, bounded by the compartment count.
  for (int c = 0; c < ncomp; ++c) {
    int cur = c;
    for (int steps = 0; steps <= ncomp; ++steps) {
      const int p = system.compartments[cur].parent;
      if (p < 0 || p >= ncomp) break;
      cur = p;
      if (cur == c) {
        flag(system.compartments[c].id, "compartment parent links form a cycle");
        break;
      }
    }
  }

  // Species: resolvable compartments, non-negative counts, per-compartment
  // id uniqueness.
  std::set<std::pair<int, std::string>> seen_species;
  for (int s = 0; s < nspec; ++s) {
    const Species& sp = system.alphabet[s];
    if (sp.compartment < 0 || sp.compartment >= ncomp) {
      flag(sp.id, "species compartment does not resolve");
    }
    if (sp.initial_count < 0) {
      flag(sp.id, "species count must be non-negative");
    }
    if (!seen_species.insert({sp.compartment, sp.id}).second) {
      flag(sp.id, "duplicate species id within compartment");
    }
  }

  // Reactions: arity bounds, resolvable slots, positive rates, unique ids.
  std::unordered_set<std::string> seen_reactions;
  for (int r = 0; r < nreac; ++r) {
    const Reaction& rx = system.reactions[r];
    if (rx.reactants.empty()) {
      flag(rx.id, "reaction needs at least one reactant");
    } else if (rx.order() > kMaxOrder) {
      flag(rx.id, std::to_string(rx.reactants.size()) +
                      " reactants exceed the trimolecular cap; decompose into "
                      "lower-order reactions");
    }
    if (static_cast<int>(rx.products.size()) > kMaxOrder) {
      flag(rx.id, std::to_string(rx.products.size()) +
                      " products exceed the trimolecular cap; decompose into "
                      "lower-order reactions");
    }
    for (int s : rx.reactants) {
      if (s < 0 || s >= nspec) {
        flag(rx.id, "reactant species index " + std::to_string(s) +
                        " does not resolve");
      }
    }
    for (int s : rx.products) {
      if (s < 0 || s >= nspec) {
        flag(rx.id, "product species index " + std::to_string(s) +
                        " does not resolve");
      }
    }
    if (!(rx.k_conc > 0.0)) {
      flag(rx.id, "rate constant must be positive");
    }
    if (!seen_reactions.insert(rx.id).second) {
      flag(rx.id, "duplicate reaction id");
    }
  }

  // If the dependency index has been built, it must match the slot arrays
  // exactly (set semantics, every consumer listed once).
  bool indexed = false;
  for (const Species& sp : system.alphabet) {
    if (!sp.consuming_reactions.empty()) indexed = true;
  }
  if (indexed) {
    for (int s = 0; s < nspec; ++s) {
      const auto& listed = system.alphabet[s].consuming_reactions;
      std::set<int> expect;
      for (int r = 0; r < nreac; ++r) {
        for (int slot : system.reactions[r].reactants) {
          if (slot == s) expect.insert(r);
        }
      }
      const std::set<int> have(listed.begin(), listed.end());
      if (have != expect || have.size() != listed.size()) {
        flag(system.alphabet[s].id,
             "consuming_reactions disagrees with the reaction slot arrays");
      }
    }
  }

  return report;
}

void build_reaction_index(MembraneSystem& system) {
  for (Species& sp : system.alphabet) {
    sp.consuming_reactions.clear();
  }
  for (std::size_t r = 0; r < system.reactions.size(); ++r) {
    std::set<int> touched;
    for (int s : system.reactions[r].reactants) {
      if (s >= 0 && s < static_cast<int>(system.alphabet.size()) &&
          touched.insert(s).second) {
        system.alphabet[s].consuming_reactions.push_back(static_cast<int>(r));
      }
    }
  }
}

void finalize(MembraneSystem& system) {
  auto report = validate(system);
  if (!report.empty()) {
    throw ValidationError(std::move(report));
  }
  build_reaction_index(system);
  // Each reaction converts with the volume of its first reactant's
  // compartment (models in scope are single-volume).
  for (Reaction& rx : system.reactions) {
    const Species& first = system.alphabet[rx.reactants.front()];
    const double volume = system.compartments[first.compartment].volume_liters;
    try {
      rx.const_discrete = discrete_constant(rx.k_conc, volume, rx.order());
    } catch (const std::invalid_argument& e) {
      throw ValidationError({{rx.id, e.what()}});
    }
  }
}

}  // namespace nwt
