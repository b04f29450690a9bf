#include "congestion/pipeline.hpp"

#include <utility>

#include "congestion/errors.hpp"
#include "congestion/poisson.hpp"
#include "json_detail.hpp"

namespace congestion {

PipelineResult run_pipeline(const WeightedGame& game,
                            const PipelineConfig& config) {
  if (!(config.epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
  if (config.rounds == 0) throw ValidationError("need at least one round");
  game.validate(config.max_degree);

  PipelineResult result;
  const double rho = rho_factor(game);

  SolveControls controls;
  controls.mode = config.mode;
  controls.epsilon = (config.epsilon / 2.0) / rho;
  result.solution = solve_relaxation(game, controls);
  result.mixture_bound = mixture_bound_report(game, result.solution);
  result.taxes = build_taxed_latencies(game, result.solution.v);

  std::vector<PolyLatency> perceived;
  perceived.reserve(result.taxes.size());
  for (const TaxedLatency& t : result.taxes) perceived.push_back(t.latency());

  DynamicsConfig dynamics;
  dynamics.rounds = config.rounds;
  dynamics.seed = config.seed;
  result.profile = hedge_dynamics(game, perceived, dynamics);
  result.best_pure = extract_best_pure(game, result.profile);
  result.opt = brute_force_opt(game);
  result.certificate = certify_ratio(game, result.best_pure.social_cost,
                                     result.opt.social_cost, config.epsilon);

  using nlohmann::json;
  json report{
      {"config",
       json{{"epsilon", config.epsilon},
            {"rounds", config.rounds},
            {"seed", config.seed},
            {"mode", config.mode == SolveMode::kEnumerate ? "enumerate"
                                                          : "colgen"},
            {"max_degree", config.max_degree}}},
      {"game", json{{"players", game.num_players()},
                    {"resources", game.num_resources()},
                    {"delta", detail::decimal_string(game.delta)},
                    {"rho", rho}}},
      {"relaxation", detail::solution_json(game, result.solution)},
      {"mixture_bound", json{{"mixture_cost", result.mixture_bound.mixture_cost},
                             {"rho", result.mixture_bound.rho},
                             {"lp_objective", result.mixture_bound.lp_objective},
                             {"slack", result.mixture_bound.slack}}},
      {"taxes", detail::taxes_json(result.taxes)},
      {"dynamics", detail::profile_json(result.profile)},
      {"best_pure", json{{"allocation", result.best_pure.allocation.choice},
                         {"social_cost", result.best_pure.social_cost}}},
      {"opt", json{{"allocation", result.opt.allocation.choice},
                   {"social_cost", result.opt.social_cost},
                   {"profiles", result.opt.profiles}}},
      {"certificate", detail::certify_json(result.certificate)}};
  result.report = detail::dump_report(report);
  return result;
}

}  // namespace congestion
