#include "nwt/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "nwt/bundled_models.hpp"
#include "nwt/engine_nwt.hpp"
#include "nwt/engine_ode.hpp"
#include "nwt/engine_ssa.hpp"
#include "text_util.hpp"

namespace nwt::cli {

namespace fs = std::filesystem;

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::nwt: return "nwt";
    case Engine::ssa: return "ssa";
    case Engine::ode: return "ode";
  }
  return "unknown";
}

ModelDocument resolve_model(const std::string& model,
                            std::optional<ModelFormat> format_override,
                            SbmlMode mode) {
  std::string name = model;
  const bool forced_bundled = name.rfind("bundled:", 0) == 0;
  if (forced_bundled) name = name.substr(8);

  if (!forced_bundled && fs::exists(model)) {
    return load_model_file(model, format_override, mode);
  }
  if (name.size() > 6 && name.substr(name.size() - 6) == ".model") {
    name = name.substr(0, name.size() - 6);
  }
  if (const BundledModel* bundled = find_bundled_model(name)) {
    return parse_native_document(bundled->text, std::string(bundled->name));
  }
  throw std::runtime_error("model '" + model +
                           "' is neither a readable file nor a bundled model "
                           "(decay, table2, lotka, circadian)");
}

namespace {

std::string model_stem(const std::string& model) {
  fs::path p(model);
  std::string stem = p.stem().string();
  if (stem.rfind("bundled:", 0) == 0) stem = stem.substr(8);
  return stem.empty() ? "model" : stem;
}

struct ReplicateResult {
  RunStats stats;
  std::uint64_t seed = 0;
  std::string error;  // empty on success
};

ReplicateResult run_replicate(const MembraneSystem& system, const RunConfig& cfg,
                              int index, const std::string& base_path) {
  ReplicateResult result;
  result.seed = cfg.seed + static_cast<std::uint64_t>(index);
  try {
    std::vector<std::string> ids;
    ids.reserve(system.alphabet.size());
    for (const Species& sp : system.alphabet) ids.push_back(sp.id);

    Recorder recorder(std::move(ids), cfg.interval, cfg.t_final,
                      cfg.engine != Engine::ode, base_path + ".csv");
    switch (cfg.engine) {
      case Engine::nwt: {
        NwtEngine engine(system, cfg.t_final, result.seed);
        result.stats = engine.run(&recorder);
        break;
      }
      case Engine::ssa: {
        SsaEngine engine(system, cfg.t_final, result.seed);
        result.stats = engine.run(&recorder);
        break;
      }
      case Engine::ode: {
        result.stats = run_ode(system, cfg.t_final, cfg.ode_step, recorder);
        break;
      }
    }
    write_stats_file(base_path + ".stats", result.stats,
                     std::string(to_string(cfg.engine)), result.seed,
                     recorder.trajectory());
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

void write_summary(const std::string& path, const RunConfig& cfg,
                   const MembraneSystem& system,
                   const std::vector<ReplicateResult>& results) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open summary file: " + path);

  out << "replicate,engine,seed,applied_rules,nondet_decisions,nondet_fraction,termination";
  for (const Species& sp : system.alphabet) {
    out << ",extinction_time_" << sp.id;
  }
  out << "\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const RunStats& st = results[i].stats;
    out << i << ',' << to_string(cfg.engine) << ',' << results[i].seed << ','
        << st.applied_rule_count << ',' << st.nondet_decision_count << ','
        << detail::format_sig6(st.nondet_fraction()) << ','
        << to_string(st.termination);
    for (std::size_t s = 0; s < system.alphabet.size(); ++s) {
      out << ',';
      if (s < st.extinction_times.size() && st.extinction_times[s]) {
        out << detail::format_fixed6(*st.extinction_times[s]);
      }
    }
    out << "\n";
  }
}

}  // namespace

int run_batch(const RunConfig& cfg) {
  if (!(cfg.t_final > 0.0)) throw std::runtime_error("--t-final must be positive");
  if (!(cfg.interval > 0.0)) throw std::runtime_error("--interval must be positive");
  if (cfg.replicates < 1) throw std::runtime_error("--replicates must be at least 1");
  if (!(cfg.ode_step > 0.0)) throw std::runtime_error("--ode-step must be positive");

  const SbmlMode mode = cfg.sbml_lenient ? SbmlMode::lenient : SbmlMode::strict;
  const ModelDocument doc = resolve_model(cfg.model, cfg.format_override, mode);
  for (const std::string& w : doc.warnings) {
    std::cerr << "warning: " << w << "\n";
  }

  std::string out_dir = cfg.out_dir;
  if (out_dir.empty()) {
    const char* env = std::getenv("NWTSIM_OUT_DIR");
    out_dir = env && *env ? env : ".";
  }
  fs::create_directories(out_dir);

  const std::string stem = model_stem(cfg.model);
  std::vector<std::string> base_paths(cfg.replicates);
  for (int i = 0; i < cfg.replicates; ++i) {
    base_paths[i] = (fs::path(out_dir) /
                     (stem + "_" + std::string(to_string(cfg.engine)) + "_rep" +
                      std::to_string(i)))
                        .string();
  }

  // Replicates are independent: shared immutable model, private engine state,
  // disjoint output paths. Seeds come from the replicate index, so results
  // do not depend on scheduling.
  std::vector<ReplicateResult> results(cfg.replicates);
  int workers = cfg.jobs > 0 ? cfg.jobs
                             : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers > cfg.replicates) workers = cfg.replicates;

  std::atomic<int> next{0};
  const auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= cfg.replicates) return;
      results[i] = run_replicate(doc.system, cfg, i, base_paths[i]);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  write_summary((fs::path(out_dir) / "summary.csv").string(), cfg, doc.system,
                results);

  int status = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const ReplicateResult& r = results[i];
    if (!r.error.empty()) {
      std::cerr << "error: replicate " << i << ": " << r.error << "\n";
      status = 1;
      continue;
    }
    std::cout << "replicate " << i << " seed " << r.seed << ": applied "
              << r.stats.applied_rule_count << ", nondet "
              << r.stats.nondet_decision_count << ", "
              << to_string(r.stats.termination) << " ("
              << detail::format_sig6(r.stats.wall_clock_seconds) << " s) -> "
              << base_paths[i] << ".csv\n";
    if (r.stats.negative_clamps > 0) {
      std::cerr << "warning: replicate " << i << ": " << r.stats.negative_clamps
                << " negative excursions clamped to zero; consider a smaller "
                   "--ode-step\n";
    }
    if (r.stats.termination == Termination::diverged) {
      std::cerr << "error: replicate " << i << ": ODE integration diverged\n";
      status = 1;
    }
  }
  return status;
}

int run_main(int argc, const char* const* argv) {
  CLI::App app{"Discrete nondeterministic reaction-network simulator"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format;
  std::string engine = "nwt";

  CLI::App* run = app.add_subcommand("run", "Simulate a model");
  run->add_option("--model", cfg.model,
                  "Model file path or bundled model name")
      ->required();
  run->add_option("--format", format, "Force input format: native or sbml");
  run->add_option("--engine", engine, "Engine: nwt, ssa or ode")
      ->check(CLI::IsMember({"nwt", "ssa", "ode"}));
  run->add_option("--t-final", cfg.t_final, "Simulation end time")->required();
  run->add_option("--interval", cfg.interval, "Sampling interval (default 1)");
  run->add_option("--seed", cfg.seed, "Base seed; replicate i uses seed+i");
  run->add_option("--replicates", cfg.replicates, "Number of replicate runs");
  run->add_option("--out-dir", cfg.out_dir,
                  "Output directory (default $NWTSIM_OUT_DIR or .)");
  run->add_option("--ode-step", cfg.ode_step, "RK4 step size (default 2e-4)");
  run->add_flag("--sbml-lenient", cfg.sbml_lenient,
                "Warn about unsupported SBML features instead of failing");
  run->add_option("--jobs", cfg.jobs, "Concurrent replicate workers");

  CLI::App* models = app.add_subcommand("models", "Bundled model fixtures");
  bool list = false;
  std::string export_dir;
  models->add_flag("--list", list, "List bundled model names");
  models->add_option("--export", export_dir, "Write bundled models to a directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) {
      cfg.engine = engine == "ssa"   ? Engine::ssa
                   : engine == "ode" ? Engine::ode
                                     : Engine::nwt;
      if (!format.empty()) {
        if (format == "native") {
          cfg.format_override = ModelFormat::native;
        } else if (format == "sbml") {
          cfg.format_override = ModelFormat::sbml_subset;
        } else {
          throw std::runtime_error("unknown --format '" + format +
                                   "' (expected native or sbml)");
        }
      }
      return run_batch(cfg);
    }
    if (models->parsed()) {
      if (!export_dir.empty()) {
        fs::create_directories(export_dir);
        for (const BundledModel& m : bundled_model_texts()) {
          const fs::path path = fs::path(export_dir) / (std::string(m.name) + ".model");
          std::ofstream out(path, std::ios::binary | std::ios::trunc);
          if (!out) throw std::runtime_error("cannot write " + path.string());
          out << m.text;
          std::cout << "wrote " << path.string() << "\n";
        }
      }
      if (list || export_dir.empty()) {
        for (const BundledModel& m : bundled_model_texts()) {
          std::cout << m.name << "\n";
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace nwt::cli
