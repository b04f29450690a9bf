#pragma once

#include <string>
#include <vector>

#include "congestion/dynamics.hpp"
#include "congestion/game.hpp"
#include "congestion/relaxation.hpp"
#include "congestion/taxes.hpp"

namespace congestion {

// All serializers emit pretty-printed JSON with sorted keys and a trailing
// newline, so equal inputs produce byte-identical files.

std::string game_to_json(const WeightedGame& game);
WeightedGame game_from_json_text(const std::string& text);

void save_game(const WeightedGame& game, const std::string& path);
WeightedGame load_game(const std::string& path);

std::string solution_to_json(const WeightedGame& game,
                             const RelaxationSolution& sol);
std::string taxes_to_json(const std::vector<TaxedLatency>& taxes);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace congestion
