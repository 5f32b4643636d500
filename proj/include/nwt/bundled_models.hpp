#ifndef NWT_BUNDLED_MODELS_HPP
#define NWT_BUNDLED_MODELS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "nwt/ingest.hpp"

namespace nwt {

/// Benchmark fixtures shipped with the simulator, in the native format.
/// Names: decay, table2, lotka, circadian.
struct BundledModel {
  std::string_view name;
  std::string_view text;
};

const std::vector<BundledModel>& bundled_model_texts();

/// nullptr when the name is unknown.
const BundledModel* find_bundled_model(std::string_view name);

/// Parses every bundled fixture.
std::vector<ModelDocument> bundled_models();

/// table2 with its feed reaction enabled (the file ships it commented out),
/// so the reactant of the slow/fast pair is resupplied periodically.
std::string table2_with_feed_text();

}  // namespace nwt

#endif  // NWT_BUNDLED_MODELS_HPP
