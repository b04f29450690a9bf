// Command-line front end: every library stage as a subcommand with JSON
// (CSV for the lower-bound curve) input and output.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "congestion/dynamics.hpp"
#include "congestion/errors.hpp"
#include "congestion/game.hpp"
#include "congestion/json_io.hpp"
#include "congestion/latency.hpp"
#include "congestion/lowerbound.hpp"
#include "congestion/pipeline.hpp"
#include "congestion/poisson.hpp"
#include "congestion/relaxation.hpp"
#include "congestion/taxes.hpp"
#include "json_detail.hpp"

namespace {

using nlohmann::json;

std::vector<double> parse_coeffs(const std::string& text) {
  std::vector<double> coeffs;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      coeffs.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw congestion::ValidationError("bad coefficient '" + item + "'");
    }
  }
  if (coeffs.empty()) {
    throw congestion::ValidationError("empty coefficient list");
  }
  return coeffs;
}

congestion::SolveMode parse_mode(const std::string& mode) {
  if (mode == "enumerate") return congestion::SolveMode::kEnumerate;
  if (mode == "colgen") return congestion::SolveMode::kColumnGeneration;
  throw congestion::ValidationError("unknown mode '" + mode + "'");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    congestion::write_text_file(out_path, text);
  }
}

// v[r][i] from a solution file produced by `solve`.
std::vector<std::vector<double>> load_marginals(const std::string& path) {
  json j;
  try {
    j = json::parse(congestion::read_text_file(path));
    return j.at("v").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw congestion::ValidationError(std::string("bad solution file: ") +
                                      e.what());
  }
}

// Perceived latencies from a taxes file produced by `taxes`.
std::vector<congestion::PolyLatency> load_perceived(
    const congestion::WeightedGame& game, const std::string& path) {
  std::vector<congestion::PolyLatency> perceived(game.resources.begin(),
                                                 game.resources.end());
  json j;
  try {
    j = json::parse(congestion::read_text_file(path));
    for (const json& entry : j.at("taxes")) {
      const int r = entry.at("resource").get<int>();
      if (r < 0 || static_cast<std::size_t>(r) >= perceived.size()) {
        throw congestion::ValidationError("taxes reference unknown resource");
      }
      perceived[r] = congestion::PolyLatency(
          entry.at("perceived").get<std::vector<double>>());
    }
  } catch (const json::exception& e) {
    throw congestion::ValidationError(std::string("bad taxes file: ") +
                                      e.what());
  }
  return perceived;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted congestion games: fractional relaxation, load "
               "taxes, no-regret play, approximation certificates"};
  app.require_subcommand(1);

  std::string in_path;
  std::string out_path;
  std::string solution_path;
  std::string taxes_path;
  std::string coeffs_text;
  std::string mode = "enumerate";
  double epsilon = 0.05;
  double weight = 1.0;
  std::size_t rounds = 100000;
  std::uint64_t seed = 0;
  int max_degree = congestion::PolyLatency::kDefaultMaxDegree;
  int max_m = 100;
  int exit_code = 0;

  auto* factor = app.add_subcommand(
      "factor", "worst-case Poisson rounding factor of a latency or game");
  factor->add_option("--in", in_path, "game JSON file");
  factor->add_option("--coeffs", coeffs_text,
                     "latency coefficients b0,b1,...");
  factor->add_option("--out", out_path, "output path (default stdout)");
  factor->add_option("--max-degree", max_degree, "latency degree cap");
  factor->callback([&] {
    json out;
    if (!coeffs_text.empty()) {
      const congestion::PolyLatency ell(parse_coeffs(coeffs_text));
      out = json{{"rho", congestion::rho_factor(ell)},
                 {"bell_index", ell.degree() + 1},
                 {"degree", ell.degree()}};
    } else if (!in_path.empty()) {
      const congestion::WeightedGame game = congestion::load_game(in_path);
      game.validate(max_degree);
      json per = json::array();
      for (std::size_t r = 0; r < game.num_resources(); ++r) {
        per.push_back(json{{"resource", r},
                           {"rho", congestion::rho_factor(game.resources[r])},
                           {"bell_index", game.resources[r].degree() + 1}});
      }
      out = json{{"rho", congestion::rho_factor(game)},
                 {"per_resource", std::move(per)}};
    } else {
      throw congestion::ValidationError("factor needs --in or --coeffs");
    }
    emit(congestion::detail::dump_report(out), out_path);
  });

  auto* solve = app.add_subcommand(
      "solve", "fractional relaxation of minimum social cost");
  solve->add_option("--in", in_path, "game JSON file")->required();
  solve->add_option("--out", out_path, "output path (default stdout)");
  solve->add_option("--mode", mode, "enumerate | colgen")
      ->check(CLI::IsMember({"enumerate", "colgen"}));
  solve->add_option("--epsilon", epsilon,
                    "relative duality-gap target (colgen)");
  solve->add_option("--max-degree", max_degree, "latency degree cap");
  solve->callback([&] {
    const congestion::WeightedGame game = congestion::load_game(in_path);
    game.validate(max_degree);
    congestion::SolveControls controls;
    controls.mode = parse_mode(mode);
    controls.epsilon = epsilon;
    const congestion::RelaxationSolution sol =
        congestion::solve_relaxation(game, controls);
    emit(congestion::solution_to_json(game, sol), out_path);
  });

  auto* taxes = app.add_subcommand(
      "taxes", "load-dependent taxes from relaxation marginals");
  taxes->add_option("--in", in_path, "game JSON file")->required();
  taxes->add_option("--solution", solution_path,
                    "solution JSON (solved here when omitted)");
  taxes->add_option("--out", out_path, "output path (default stdout)");
  taxes->add_option("--mode", mode, "enumerate | colgen")
      ->check(CLI::IsMember({"enumerate", "colgen"}));
  taxes->add_option("--epsilon", epsilon,
                    "relative duality-gap target (colgen)");
  taxes->add_option("--max-degree", max_degree, "latency degree cap");
  taxes->callback([&] {
    const congestion::WeightedGame game = congestion::load_game(in_path);
    game.validate(max_degree);
    std::vector<std::vector<double>> v;
    if (!solution_path.empty()) {
      v = load_marginals(solution_path);
    } else {
      congestion::SolveControls controls;
      controls.mode = parse_mode(mode);
      controls.epsilon = epsilon;
      v = congestion::solve_relaxation(game, controls).v;
    }
    emit(congestion::taxes_to_json(
             congestion::build_taxed_latencies(game, v)),
         out_path);
  });

  auto* equilibrate = app.add_subcommand(
      "equilibrate", "no-regret play, best pure profile, ratio certificate");
  equilibrate->add_option("--in", in_path, "game JSON file")->required();
  equilibrate->add_option("--taxes", taxes_path,
                          "taxes JSON (untaxed play when omitted)");
  equilibrate->add_option("--out", out_path, "output path (default stdout)");
  equilibrate->add_option("--rounds", rounds, "play rounds");
  equilibrate->add_option("--seed", seed, "RNG seed");
  equilibrate->add_option("--epsilon", epsilon, "certificate headroom");
  equilibrate->add_option("--max-degree", max_degree, "latency degree cap");
  equilibrate->callback([&] {
    const congestion::WeightedGame game = congestion::load_game(in_path);
    game.validate(max_degree);
    const std::vector<congestion::PolyLatency> perceived =
        taxes_path.empty() ? game.resources
                           : load_perceived(game, taxes_path);
    congestion::DynamicsConfig config;
    config.rounds = rounds;
    config.seed = seed;
    const congestion::EquilibriumProfile profile =
        congestion::hedge_dynamics(game, perceived, config);
    const congestion::BestPure best =
        congestion::extract_best_pure(game, profile);
    const congestion::OptResult opt = congestion::brute_force_opt(game);
    const congestion::CertifyReport cert = congestion::certify_ratio(
        game, best.social_cost, opt.social_cost, epsilon);
    const json out{
        {"dynamics", congestion::detail::profile_json(profile)},
        {"best_pure", json{{"allocation", best.allocation.choice},
                           {"social_cost", best.social_cost}}},
        {"opt", json{{"allocation", opt.allocation.choice},
                     {"social_cost", opt.social_cost}}},
        {"certificate", congestion::detail::certify_json(cert)}};
    emit(congestion::detail::dump_report(out), out_path);
    if (!cert.pass) exit_code = 2;
  });

  auto* lowerbound = app.add_subcommand(
      "lowerbound", "uniform-profile ratio curve of the symmetric family");
  lowerbound->add_option("--coeffs", coeffs_text,
                         "latency coefficients b0,b1,... (default 0,1)");
  lowerbound->add_option("--max-m", max_m, "largest player count");
  lowerbound->add_option("--out", out_path, "output path (default stdout)");
  lowerbound->callback([&] {
    const congestion::PolyLatency ell(
        coeffs_text.empty() ? std::vector<double>{0.0, 1.0}
                            : parse_coeffs(coeffs_text));
    const std::vector<double> curve =
        congestion::uniform_ratio_curve(max_m, ell);
    std::string csv = "m,ratio\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
      csv += std::to_string(i + 1) + "," +
             congestion::detail::decimal_string(curve[i]) + "\n";
    }
    emit(csv, out_path);
  });

  auto* bruteforce = app.add_subcommand(
      "bruteforce", "exhaustive minimum social cost");
  bruteforce->add_option("--in", in_path, "game JSON file")->required();
  bruteforce->add_option("--out", out_path, "output path (default stdout)");
  bruteforce->add_option("--max-degree", max_degree, "latency degree cap");
  bruteforce->callback([&] {
    const congestion::WeightedGame game = congestion::load_game(in_path);
    game.validate(max_degree);
    const congestion::OptResult opt = congestion::brute_force_opt(game);
    const json out{{"opt", opt.social_cost},
                   {"allocation", opt.allocation.choice},
                   {"profiles", opt.profiles}};
    emit(congestion::detail::dump_report(out), out_path);
  });

  auto* transform = app.add_subcommand(
      "transform", "unit-weight game to an equal-weights game with the same "
                   "scaled social cost");
  transform->add_option("--in", in_path, "unit-weight game JSON file")
      ->required();
  transform->add_option("--weight", weight, "target common weight")
      ->required();
  transform->add_option("--out", out_path, "output path (default stdout)");
  transform->callback([&] {
    const congestion::WeightedGame game = congestion::load_game(in_path);
    emit(congestion::game_to_json(
             congestion::unweighted_to_weighted(game, weight)),
         out_path);
  });

  auto* pipeline = app.add_subcommand(
      "pipeline", "solve, tax, play, certify; exit 0 iff the certificate "
                  "passes");
  pipeline->add_option("--in", in_path, "game JSON file")->required();
  pipeline->add_option("--out", out_path, "report path (default stdout)");
  pipeline->add_option("--epsilon", epsilon, "overall accuracy target");
  pipeline->add_option("--rounds", rounds, "play rounds");
  pipeline->add_option("--seed", seed, "RNG seed");
  pipeline->add_option("--mode", mode, "enumerate | colgen")
      ->check(CLI::IsMember({"enumerate", "colgen"}));
  pipeline->add_option("--max-degree", max_degree, "latency degree cap");
  pipeline->callback([&] {
    const congestion::WeightedGame game = congestion::load_game(in_path);
    congestion::PipelineConfig config;
    config.epsilon = epsilon;
    config.rounds = rounds;
    config.seed = seed;
    config.mode = parse_mode(mode);
    config.max_degree = max_degree;
    const congestion::PipelineResult result =
        congestion::run_pipeline(game, config);
    emit(result.report, out_path);
    if (!result.certificate.pass) exit_code = 2;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const congestion::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const congestion::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 4;
  } catch (const congestion::NumericRangeError& e) {
    std::cerr << "numeric range: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
