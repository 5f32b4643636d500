#ifndef NWT_CLI_HPP
#define NWT_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "nwt/ingest.hpp"
#include "nwt/recorder.hpp"

namespace nwt::cli {

enum class Engine { nwt, ssa, ode };

std::string_view to_string(Engine e);

struct RunConfig {
  std::string model;  // path or bundled model name
  std::optional<ModelFormat> format_override;
  Engine engine = Engine::nwt;
  double t_final = 0.0;
  double interval = 1.0;
  std::uint64_t seed = 1;     // replicate i runs with seed + i
  int replicates = 1;
  std::string out_dir;        // default: $NWTSIM_OUT_DIR or "."
  // Small enough for explicit RK4 to stay stable on the stiffest bundled
  // model (the circadian network's complex-formation rates).
  double ode_step = 2e-4;
  bool sbml_lenient = false;
  int jobs = 0;               // 0 = one worker per hardware thread
};

/// Loads a model by path or bundled name (optionally "bundled:<name>").
ModelDocument resolve_model(const std::string& model,
                            std::optional<ModelFormat> format_override,
                            SbmlMode mode);

/// Runs the configured batch: one CSV + stats sidecar per replicate plus a
/// summary.csv, replicates executed concurrently but reproducibly (replicate
/// i always uses seed + i). Returns a process exit status.
int run_batch(const RunConfig& config);

/// Full command-line entry point (argument parsing + dispatch).
int run_main(int argc, const char* const* argv);

}  // namespace nwt::cli

#endif  // NWT_CLI_HPP
