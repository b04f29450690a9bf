#pragma once

// Shared nlohmann::json composition used by the serializers and the pipeline
// report writer.  Not installed.

#include <string>
#include <vector>

#include "congestion/dynamics.hpp"
#include "congestion/game.hpp"
#include "congestion/relaxation.hpp"
#include "congestion/taxes.hpp"
#include "json.hpp"

namespace congestion::detail {

std::string decimal_string(double value);

nlohmann::json game_json(const WeightedGame& game);
WeightedGame game_from_json(const nlohmann::json& j);

nlohmann::json solution_json(const WeightedGame& game,
                             const RelaxationSolution& sol);
nlohmann::json taxes_json(const std::vector<TaxedLatency>& taxes);
nlohmann::json profile_json(const EquilibriumProfile& profile);
nlohmann::json certify_json(const CertifyReport& report);

std::string dump_report(const nlohmann::json& j);

}  // namespace congestion::detail
