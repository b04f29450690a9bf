#include "congestion/json_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "congestion/errors.hpp"
#include "json_detail.hpp"

namespace congestion {
namespace detail {
namespace {

using nlohmann::json;

double parse_decimal(const json& j, const char* what) {
  double value = 0.0;
  if (j.is_number()) {
    value = j.get<double>();
  } else if (j.is_string()) {
    const std::string text = j.get<std::string>();
    try {
      std::size_t used = 0;
      value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw ValidationError(std::string(what) + " is not a decimal: '" +
                            text + "'");
    }
  } else {
    throw ValidationError(std::string(what) +
                          " must be a decimal string or number");
  }
  return value;
}

const json& field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) {
    throw ValidationError(std::string("missing field '") + name + "'");
  }
  return *it;
}

}  // namespace

std::string decimal_string(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

json game_json(const WeightedGame& game) {
  json players = json::array();
  for (double w : game.weights) {
    players.push_back(json{{"weight", decimal_string(w)}});
  }
  json resources = json::array();
  for (const PolyLatency& ell : game.resources) {
    json coeffs = json::array();
    for (double b : ell.coeffs()) coeffs.push_back(b);
    resources.push_back(json{{"coeffs", std::move(coeffs)}});
  }
  return json{{"delta", decimal_string(game.delta)},
              {"players", std::move(players)},
              {"resources", std::move(resources)},
              {"strategies", game.strategies}};
}

WeightedGame game_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("game must be a JSON object");
  WeightedGame game;
  game.delta = parse_decimal(field(j, "delta"), "delta");

  const json& players = field(j, "players");
  if (!players.is_array()) throw ValidationError("'players' must be a list");
  for (const json& p : players) {
    game.weights.push_back(parse_decimal(field(p, "weight"), "weight"));
  }

  const json& resources = field(j, "resources");
  if (!resources.is_array()) {
    throw ValidationError("'resources' must be a list");
  }
  for (const json& res : resources) {
    const json& coeffs = field(res, "coeffs");
    if (!coeffs.is_array() || coeffs.empty()) {
      throw ValidationError("'coeffs' must be a non-empty list");
    }
    std::vector<double> b;
    for (const json& v : coeffs) {
      if (!v.is_number()) throw ValidationError("coefficients are numbers");
      b.push_back(v.get<double>());
    }
    try {
      game.resources.emplace_back(std::move(b));
    } catch (const Error& e) {
      throw ValidationError(std::string("bad latency: ") + e.what());
    }
  }

  const json& strategies = field(j, "strategies");
  if (!strategies.is_array()) {
    throw ValidationError("'strategies' must be a list");
  }
  try {
    game.strategies =
        strategies.get<std::vector<std::vector<std::vector<int>>>>();
  } catch (const json::exception&) {
    throw ValidationError("'strategies' must be a list of lists of resource "
                          "index lists");
  }
  return game;
}

json solution_json(const WeightedGame& game, const RelaxationSolution& sol) {
  json columns = json::array();
  for (const auto& [id, mass] : sol.z) {
    if (mass == 0.0) continue;
    std::vector<int> members;
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      if (id.subset & (std::uint64_t{1} << i)) {
        members.push_back(static_cast<int>(i));
      }
    }
    columns.push_back(json{{"resource", id.resource},
                           {"players", std::move(members)},
                           {"mass", mass}});
  }
  json trace = json::array();
  for (const auto& [primal, dual] : sol.stats.bound_trace) {
    trace.push_back(json{{"primal", primal}, {"dual", dual}});
  }
  return json{{"objective", sol.objective},
              {"columns", std::move(columns)},
              {"v", sol.v},
              {"y", sol.y},
              {"duals", json{{"xi", sol.xi}, {"eta", sol.eta}}},
              {"stats", json{{"columns", sol.stats.columns},
                             {"pricing_rounds", sol.stats.pricing_rounds},
                             {"simplex_iterations",
                              sol.stats.simplex_iterations},
                             {"bound_trace", std::move(trace)}}}};
}

json taxes_json(const std::vector<TaxedLatency>& taxes) {
  json out = json::array();
  for (const TaxedLatency& t : taxes) {
    out.push_back(json{{"resource", t.resource},
                       {"tax", t.tax_coeffs},
                       {"perceived", t.coeffs},
                       {"v", t.v}});
  }
  return json{{"taxes", std::move(out)}};
}

json profile_json(const EquilibriumProfile& profile) {
  return json{{"rounds", profile.rounds},
              {"seed", profile.seed},
              {"avg_realized", profile.avg_realized},
              {"regret", profile.regret}};
}

json certify_json(const CertifyReport& report) {
  return json{{"opt", report.opt},
              {"best_pure", report.best_pure},
              {"ratio", report.ratio},
              {"rho", report.rho},
              {"epsilon", report.epsilon},
              {"pass", report.pass}};
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

std::string game_to_json(const WeightedGame& game) {
  return detail::dump_report(detail::game_json(game));
}

WeightedGame game_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  return detail::game_from_json(j);
}

void save_game(const WeightedGame& game, const std::string& path) {
  write_text_file(path, game_to_json(game));
}

WeightedGame load_game(const std::string& path) {
  return game_from_json_text(read_text_file(path));
}

std::string solution_to_json(const WeightedGame& game,
                             const RelaxationSolution& sol) {
  return detail::dump_report(detail::solution_json(game, sol));
}

std::string taxes_to_json(const std::vector<TaxedLatency>& taxes) {
  return detail::dump_report(detail::taxes_json(taxes));
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw ValidationError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace congestion
