#ifndef NWT_MODEL_HPP
#define NWT_MODEL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nwt {

/// Avogadro's constant used for all count/concentration conversions.
inline constexpr double kAvogadro = 6.0221415e23;

/// Reactions are capped at trimolecular order; higher-order inputs must be
/// decomposed into a chain of lower-order reactions by the modeler.
inline constexpr int kMaxOrder = 3;

struct Compartment {
  std::string id;
  double volume_liters = 0.0;
  int parent = -1;  // index into MembraneSystem::compartments, -1 = root

  friend bool operator==(const Compartment&, const Compartment&) = default;
};

struct Species {
  std::string id;          // unique within its compartment
  int compartment = -1;    // index into MembraneSystem::compartments
  std::int64_t initial_count = 0;
  // Indices of the reactions that consume this species (filled by
  // build_reaction_index); set semantics, repeats live in the slot arrays.
  std::vector<int> consuming_reactions;

  friend bool operator==(const Species&, const Species&) = default;
};

struct Reaction {
  std::string id;              // globally unique
  std::vector<int> reactants;  // 1..3 species indices, repeats allowed
  std::vector<int> products;   // 0..3 species indices
  double k_conc = 0.0;         // concentration-based rate constant
  double const_discrete = 0.0; // count-based constant (filled by finalize)

  int order() const { return static_cast<int>(reactants.size()); }

  friend bool operator==(const Reaction&, const Reaction&) = default;
};

struct MembraneSystem {
  std::vector<Compartment> compartments;
  std::vector<Species> alphabet;
  std::vector<Reaction> reactions;

  int find_compartment(std::string_view id) const;
  // Species ids are unique per compartment; an unqualified lookup returns the
  // match only if it is globally unambiguous (-2 if ambiguous, -1 if absent).
  int find_species(std::string_view id) const;
  int find_species_in(std::string_view compartment_id, std::string_view id) const;
  int find_reaction(std::string_view id) const;

  friend bool operator==(const MembraneSystem&, const MembraneSystem&) = default;
};

struct Violation {
  std::string subject;  // offending compartment/species/reaction id
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Thrown when an operation requires a valid system but validation failed.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> report);
  const std::vector<Violation>& report() const { return report_; }

 private:
  std::vector<Violation> report_;
};

/// Converts a concentration-based rate constant into the count-based constant
/// used by the discrete engines: k / (V^(order-1) * N_A^(order-1)).
/// Throws std::invalid_argument on non-positive inputs or order outside 1..3.
double discrete_constant(double k_conc, double volume_liters, int order);

/// Molar concentration -> integer molecule count, rounded to nearest with
/// ties away from zero. Throws std::invalid_argument on negative input.
std::int64_t concentration_to_count(double conc_molar, double volume_liters);

/// Structural validation; returns every violated invariant (empty = valid).
std::vector<Violation> validate(const MembraneSystem& system);

/// Fills Species::consuming_reactions from the reaction slot arrays.
void build_reaction_index(MembraneSystem& system);

/// Validates (throwing ValidationError on any violation), builds the
/// species->reaction index and computes the discrete kinetic constants.
/// Every ingested system passes through here before reaching an engine.
void finalize(MembraneSystem& system);

}  // namespace nwt

#endif  // NWT_MODEL_HPP
