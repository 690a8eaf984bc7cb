// Command-line front end: configure, run, resume, evaluate, and probe.
//
// Exit codes are a stable contract: 0 success, 2 missing input, 3 validation
// failure, 4 runtime/data failure, 5 artifact version mismatch.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "snnevo/artifacts.hpp"
#include "snnevo/config.hpp"
#include "snnevo/evolution.hpp"
#include "snnevo/fixedpoint.hpp"
#include "snnevo/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMissingInput = 2;
constexpr int kExitValidation = 3;
constexpr int kExitRuntime = 4;
constexpr int kExitVersion = 5;

void require_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw snnevo::IoError("no such file: '" + path.string() + "'");
}

snnevo::GenerationHook make_run_hook(const snnevo::ArtifactPaths& paths, int checkpoint_every) {
  return [paths, checkpoint_every](const snnevo::GenerationRecord& rec,
                                   const snnevo::Checkpoint& cp) {
    snnevo::append_generation_row(paths, rec);
    if (checkpoint_every > 0 && rec.generation % checkpoint_every == 0)
      snnevo::save_checkpoint_file(paths.checkpoint, cp);
    std::cerr << "generation " << rec.generation << "  best " << rec.best_fitness << "  mean "
              << rec.mean_fitness << "  score " << rec.best_mean_score << '\n';
  };
}

void write_final_artifacts(const snnevo::ArtifactPaths& paths, const snnevo::SearchResult& res) {
  snnevo::save_genome_file(paths.best_genome, res.best_genome);
  snnevo::save_checkpoint_file(paths.checkpoint, res.final_checkpoint);
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override, int workers) {
  require_file(config_path);
  snnevo::RunConfig cfg = snnevo::load_run_config(config_path);
  if (seed_override) cfg.search.master_seed = *seed_override;
  const auto paths = snnevo::prepare_out_dir(out_dir, cfg);
  const auto res = snnevo::run_search(cfg.search, workers, make_run_hook(paths, cfg.checkpoint_every));
  write_final_artifacts(paths, res);
  std::cerr << "run complete: " << res.records.size() << " generations, best fitness "
            << res.best_fitness << '\n';
  return kExitOk;
}

int cmd_resume(const std::string& checkpoint_path, const std::string& out_dir, int workers) {
  require_file(checkpoint_path);
  const snnevo::Checkpoint cp = snnevo::load_checkpoint_file(checkpoint_path);
  snnevo::RunConfig cfg;
  cfg.search = cp.config;
  const auto paths = snnevo::prepare_out_dir(out_dir, cfg);
  const auto res = snnevo::resume_search(cp, workers, make_run_hook(paths, cfg.checkpoint_every));
  write_final_artifacts(paths, res);
  std::cerr << "resume complete: " << res.records.size() << " new generations, best fitness "
            << res.best_fitness << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& genome_path, const std::string& config_path,
             std::optional<int> episodes_override) {
  require_file(genome_path);
  require_file(config_path);
  const snnevo::RunConfig cfg = snnevo::load_run_config(config_path);
  const snnevo::Genome genome = snnevo::load_genome_file(genome_path);
  snnevo::FitnessConfig fitness = cfg.search.fitness;
  if (episodes_override) fitness.episodes = *episodes_override;
  snnevo::RngStream stream =
      snnevo::derive_stream(cfg.search.master_seed, 0, 0, "cli_eval");
  const auto report =
      snnevo::evaluate(genome, cfg.search.topology, cfg.search.scenario, fitness, stream);
  std::cout << snnevo::fitness_report_to_json(report).dump(2) << '\n';
  return kExitOk;
}

int cmd_probe(const std::string& genome_path, const std::string& config_path,
              const std::string& kind_name, double level, int episodes, double tol, int window) {
  require_file(genome_path);
  require_file(config_path);
  const snnevo::RunConfig cfg = snnevo::load_run_config(config_path);
  const snnevo::Genome genome = snnevo::load_genome_file(genome_path);
  const snnevo::Perturbation::Kind kind = snnevo::parse_perturbation_kind(kind_name);
  const snnevo::ProbeConfig probe{episodes, tol, window};
  const auto [train, perturbed] =
      snnevo::generalization_probe(genome, cfg.search.topology, cfg.search.scenario, kind, level,
                                   probe, cfg.search.fitness.t_max);
  snnevo::Json out;
  out["train"] = snnevo::convergence_report_to_json(train);
  out["perturbed"] = snnevo::convergence_report_to_json(perturbed);
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snnevo: evolutionary search for stable spiking-network agents"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string genome_path;
  std::string checkpoint_path;
  std::string perturb_kind = "none";
  std::optional<std::uint64_t> seed_override;
  int workers = 1;
  std::optional<int> episodes_override;
  double level = 0.0;
  int probe_episodes = 20;
  double tol = 0.05;
  int window = 3;

  auto* run = app.add_subcommand("run", "run an evolutionary search from a config file");
  run->add_option("--config", config_path, "run config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--seed", seed_override, "override search.master_seed");
  run->add_option("--workers", workers, "parallel fitness evaluations");

  auto* resume = app.add_subcommand("resume", "continue a checkpointed run");
  resume->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
  resume->add_option("--out", out_dir, "output directory")->required();
  resume->add_option("--workers", workers, "parallel fitness evaluations");

  auto* eval = app.add_subcommand("eval", "evaluate one genome on the configured scenario");
  eval->add_option("--genome", genome_path, "genome file")->required();
  eval->add_option("--config", config_path, "run config (JSON)")->required();
  eval->add_option("--episodes", episodes_override, "override fitness.k");

  auto* probe = app.add_subcommand("probe", "fixed-point probe on train + perturbed scenario");
  probe->add_option("--genome", genome_path, "genome file")->required();
  probe->add_option("--config", config_path, "run config (JSON)")->required();
  probe->add_option("--perturb", perturb_kind, "perturbation kind")->required();
  probe->add_option("--level", level, "perturbation level in [0, 1]");
  probe->add_option("--episodes", probe_episodes, "episodes per probe sequence");
  probe->add_option("--tol", tol, "convergence tolerance");
  probe->add_option("--window", window, "consecutive sub-tolerance steps required");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (workers < 1) throw snnevo::ValidationError("--workers must be at least 1");
    if (run->parsed()) return cmd_run(config_path, out_dir, seed_override, workers);
    if (resume->parsed()) return cmd_resume(checkpoint_path, out_dir, workers);
    if (eval->parsed()) return cmd_eval(genome_path, config_path, episodes_override);
    return cmd_probe(genome_path, config_path, perturb_kind, level, probe_episodes, tol, window);
  } catch (const snnevo::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMissingInput;
  } catch (const snnevo::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const snnevo::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const snnevo::VersionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVersion;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
