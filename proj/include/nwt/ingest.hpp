#ifndef NWT_INGEST_HPP
#define NWT_INGEST_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nwt/model.hpp"

namespace nwt {

/// Syntax-level failure; carries the 1-based line (native) or the XML
/// context (SBML) where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

enum class ModelFormat { native, sbml_subset };

enum class SbmlMode {
  strict,   // any unsupported element/attribute is an error
  lenient,  // unsupported pieces are skipped with a recorded warning
};

enum class InitMode { count, concentration };

struct ModelDocument {
  std::string source;  // path or "<memory>"
  ModelFormat format = ModelFormat::native;
  MembraneSystem system;              // finalized: validated + indexed
  std::vector<InitMode> init_modes;   // per species, parallel to alphabet
  std::vector<std::string> warnings;  // lenient-mode SBML notes
};

/// Parses the line-oriented native model format:
///   compartment <id> volume=<liters> [parent=<id>]
///   species <id> in <compartment> (count=<int> | conc=<molar>)
///   reaction <id>: <sp>[+<sp>[+<sp>]] -> (@ | <sp>[+<sp>[+<sp>]]) @ <k_conc>
/// '#' begins a comment; blank lines are ignored. Species tokens may be
/// qualified as <compartment>:<id> when an id exists in several compartments.
/// Returns a finalized system; throws ParseError / ValidationError.
MembraneSystem parse_native(std::string_view text);
ModelDocument parse_native_document(std::string_view text,
                                    std::string source = "<memory>");

/// Parses the mass-action subset of SBML: listOfCompartments (id, size),
/// listOfSpecies (id, compartment, initialAmount|initialConcentration),
/// listOfReactions with reactant/product speciesReference entries and a
/// kineticLaw carrying exactly one numeric parameter (the rate constant).
/// Anything else in the document is rejected (strict) or warned (lenient).
MembraneSystem parse_sbml_subset(std::string_view xml_text,
                                 SbmlMode mode = SbmlMode::strict,
                                 std::vector<std::string>* warnings = nullptr);
ModelDocument parse_sbml_document(std::string_view xml_text,
                                  SbmlMode mode = SbmlMode::strict,
                                  std::string source = "<memory>");

/// Canonical serialization of a finalized system. Deterministic;
/// parse_native(write_native(s)) is structurally equal to s, and a second
/// serialization is bit-identical. Initial conditions are written as counts.
std::string write_native(const MembraneSystem& system);

/// Loads a model file, choosing the format from the override or extension
/// (.xml/.sbml -> SBML subset, anything else -> native).
ModelDocument load_model_file(const std::string& path,
                              std::optional<ModelFormat> format_override = {},
                              SbmlMode mode = SbmlMode::strict);

}  // namespace nwt

#endif  // NWT_INGEST_HPP
