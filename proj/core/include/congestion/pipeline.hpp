#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "congestion/dynamics.hpp"
#include "congestion/game.hpp"
#include "congestion/relaxation.hpp"
#include "congestion/taxes.hpp"

namespace congestion {

struct PipelineConfig {
  double epsilon = 0.05;  // overall accuracy, split between LP and dynamics
  std::size_t rounds = 100000;
  std::uint64_t seed = 0;
  SolveMode mode = SolveMode::kEnumerate;
  int max_degree = PolyLatency::kDefaultMaxDegree;
};

struct PipelineResult {
  RelaxationSolution solution;
  MixtureBoundReport mixture_bound;
  std::vector<TaxedLatency> taxes;
  EquilibriumProfile profile;
  BestPure best_pure;
  OptResult opt;
  CertifyReport certificate;
  std::string report;  // deterministic JSON covering every stage
};

// validate -> solve relaxation -> taxes -> no-regret play -> best pure ->
// exhaustive optimum -> ratio certificate.  Half of epsilon goes to the
// relaxation gap (scaled down by rho), half to the play ratio headroom.
PipelineResult run_pipeline(const WeightedGame& game,
                            const PipelineConfig& config);

}  // namespace congestion
