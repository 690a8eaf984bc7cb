#include <doctest.h>

#include <string>

#include "snnevo/artifacts.hpp"
#include "snnevo/config.hpp"

using namespace snnevo;

namespace {

Json minimal_doc() {
  return Json::parse(R"({
    "search": {"pop_size": 4, "generations": 2, "master_seed": 1},
    "scenario": {"name": "cue_assoc"}
  })");
}

void check_fails_with(const Json& doc, const std::string& needle) {
  try {
    parse_run_config(doc);
    FAIL("expected a validation error mentioning ", needle);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("minimal config resolves every default") {
  const RunConfig cfg = parse_run_config(minimal_doc());
  CHECK(cfg.search.pop_size == 4);
  CHECK(cfg.search.generations == 2);
  CHECK(cfg.search.tournament_k == 3);
  CHECK(cfg.search.elitism_count == 2);
  CHECK(cfg.search.crossover_prob == 0.9);
  CHECK_FALSE(cfg.search.target_fitness.has_value());
  CHECK(cfg.search.fitness.episodes == 5);
  CHECK(cfg.search.fitness.dispersion_weight == 0.5);
  CHECK(cfg.search.fitness.plasticity_epsilon == 1e-3);
  CHECK(cfg.search.fitness.penalty == 80.0);  // 10 * max_score for 8 rounds
  CHECK(cfg.search.fitness.t_max == 64);
  CHECK(cfg.search.topology.n == 32);
  CHECK(cfg.search.topology.n_in == 4);
  CHECK(cfg.search.topology.n_out == 4);
  CHECK(cfg.search.scenario.cue.cues == 4);
  CHECK(cfg.checkpoint_every == 1);
}

TEST_CASE("penalty default follows the scenario's max score") {
  Json doc = minimal_doc();
  doc["scenario"]["name"] = "gridworld_forage";
  const RunConfig cfg = parse_run_config(doc);
  CHECK(cfg.search.fitness.penalty == 30.0);  // 10 * 3 food items
}

TEST_CASE("missing and mistyped fields name their full path") {
  Json no_pop = minimal_doc();
  no_pop["search"].erase("pop_size");
  check_fails_with(no_pop, "search.pop_size");

  Json no_scenario = minimal_doc();
  no_scenario.erase("scenario");
  check_fails_with(no_scenario, "scenario");

  Json bad_type = minimal_doc();
  bad_type["search"]["pop_size"] = "many";
  check_fails_with(bad_type, "search.pop_size");

  Json fractional = minimal_doc();
  fractional["search"]["generations"] = 2.5;
  check_fails_with(fractional, "search.generations");
}

TEST_CASE("unknown keys anywhere are rejected with their path") {
  Json top = minimal_doc();
  top["serach"] = Json::object();
  check_fails_with(top, "serach");

  Json nested = minimal_doc();
  nested["search"]["pop_sizee"] = 4;
  check_fails_with(nested, "search.pop_sizee");

  Json params = minimal_doc();
  params["scenario"]["params"] = Json::object();
  params["scenario"]["params"]["cuez"] = 4;
  check_fails_with(params, "scenario.params.cuez");

  Json pert = minimal_doc();
  pert["scenario"]["perturbation"] = Json::object();
  pert["scenario"]["perturbation"]["strength"] = 1;
  check_fails_with(pert, "scenario.perturbation.strength");
}

TEST_CASE("constraint violations name the offending field") {
  Json elitism = minimal_doc();
  elitism["search"]["elitism_count"] = 4;
  check_fails_with(elitism, "search.elitism_count");

  Json tournament = minimal_doc();
  tournament["search"]["tournament_k"] = 9;
  check_fails_with(tournament, "search.tournament_k");

  Json k1 = minimal_doc();
  k1["fitness"] = Json::object();
  k1["fitness"]["k"] = 1;
  check_fails_with(k1, "fitness.k");

  Json topo = minimal_doc();
  topo["topology"] = Json::object();
  topo["topology"]["n_in"] = 5;  // cue_assoc has 4 observation dims
  check_fails_with(topo, "topology.n_in");

  Json level = minimal_doc();
  level["scenario"]["perturbation"] = Json::object();
  level["scenario"]["perturbation"]["kind"] = "obs_noise";
  level["scenario"]["perturbation"]["level"] = 2.0;
  check_fails_with(level, "scenario.perturbation.level");

  Json kind = minimal_doc();
  kind["scenario"]["perturbation"] = Json::object();
  kind["scenario"]["perturbation"]["kind"] = "layout_shift";
  check_fails_with(kind, "scenario.perturbation.kind");

  Json unknown_kind = minimal_doc();
  unknown_kind["scenario"]["perturbation"] = Json::object();
  unknown_kind["scenario"]["perturbation"]["kind"] = "fog";
  check_fails_with(unknown_kind, "scenario.perturbation.kind");
}

TEST_CASE("explicit values override every default") {
  const Json doc = Json::parse(R"({
    "search": {
      "pop_size": 8, "generations": 3, "master_seed": 9,
      "tournament_k": 4, "elitism_count": 1, "crossover_prob": 0.5,
      "target_fitness": 6.5,
      "mutation": {"weight_sigma": 0.3, "micro_sigma": 0.05,
                   "flag_flip_prob": 0.01, "per_gene_prob": 0.2}
    },
    "fitness": {"k": 3, "lambda_disp": 0.25, "eps_plastic": 0.01,
                "penalty": 12.0, "t_max": 32},
    "scenario": {"name": "gridworld_forage", "seed": 5,
                 "params": {"grid": 6, "food": 2, "decision_window": 4},
                 "perturbation": {"kind": "obs_noise", "level": 0.2}},
    "topology": {"n": 16, "n_in": 4, "n_out": 4},
    "output": {"checkpoint_every": 0}
  })");
  const RunConfig cfg = parse_run_config(doc);
  CHECK(cfg.search.tournament_k == 4);
  CHECK(cfg.search.target_fitness == 6.5);
  CHECK(cfg.search.mutation.micro_sigma == 0.05);
  CHECK(cfg.search.fitness.penalty == 12.0);
  CHECK(cfg.search.scenario.gridworld.grid == 6);
  CHECK(cfg.search.scenario.perturbation.kind == Perturbation::Kind::obs_noise);
  CHECK(cfg.search.topology.n == 16);
  CHECK(cfg.checkpoint_every == 0);
}

TEST_CASE("the resolved echo re-parses to the identical configuration") {
  Json doc = minimal_doc();
  doc["fitness"] = Json::object();
  doc["fitness"]["k"] = 3;
  const RunConfig cfg = parse_run_config(doc);
  const Json echo = resolved_config_json(cfg);
  const RunConfig again = parse_run_config(echo);
  CHECK(resolved_config_json(again).dump() == echo.dump());
}

TEST_CASE("load_run_config distinguishes missing files from bad content") {
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("generation rows render with full precision and a fixed header") {
  CHECK(generations_csv_header() ==
        "generation,best_fitness,mean_fitness,best_mean_score,best_dispersion,"
        "best_plasticity,best_genome_digest");
  GenerationRecord rec;
  rec.generation = 3;
  rec.best_fitness = 1.0 / 3.0;
  rec.mean_fitness = 2.0;
  rec.best_mean_score = 0.5;
  rec.best_dispersion = 0.0;
  rec.best_plasticity = 1e-3;
  rec.best_genome_digest = 12345678901234567ULL;
  CHECK(format_generation_row(rec) ==
        "3,0.33333333333333331,2,0.5,0,0.001,12345678901234567");
}
