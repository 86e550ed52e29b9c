#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "json.hpp"

#include "errors.hpp"
#include "game.hpp"
#include "ranking.hpp"
#include "synthetic.hpp"
#include "tournament.hpp"
#include "uct.hpp"

namespace searchlab {

using Json = nlohmann::json;

// Reads and parses one JSON document; failures carry the config error code
// so the CLI can distinguish them from runtime trouble.
Json load_json_file(const std::filesystem::path& path);
Json parse_json(const std::string& text);

// Field access that names the offending field in the error message.
const Json& config_at(const Json& j, const std::string& key);

template <typename T>
T config_get(const Json& j, const std::string& key) {
  const Json& field = config_at(j, key);
  try {
    return field.get<T>();
  } catch (const std::exception&) {
    fail(ErrorCode::Config, "config: field '" + key + "' has the wrong type");
  }
}

template <typename T>
T config_get_or(const Json& j, const std::string& key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return config_get<T>(j, key);
}

// Game specs. `kind` selects among "builtin" (the connection game), "kstep",
// "dual", and "scenario".
std::shared_ptr<const Game> make_game(const Json& spec);
Json game_to_json(const Game& game);

KStepSpec kstep_from_json(const Json& j);
DualSpec dual_from_json(const Json& j);
ScenarioSpec scenario_from_json(const Json& j);
Json kstep_to_json(const KStepSpec& s);
Json dual_to_json(const DualSpec& s);
Json scenario_to_json(const ScenarioSpec& s);

// Search and player configs. Parsers that may wire a heuristic take the game
// so an unsupported pairing is rejected while the config is being read.
UctConfig uct_from_json(const Json& j, const Game* game = nullptr);
Json uct_to_json(const UctConfig& cfg);

PlayerSpec player_from_json(const Json& j, const Game* game = nullptr);
Json player_to_json(const PlayerSpec& p);
std::string player_label(const PlayerSpec& p);

RankEvaluator evaluator_from_json(const Json& j, const Game* game = nullptr);

// Normalized static evaluation for games that provide one; config error
// otherwise.
std::function<double(const Game&, const GameState&)> normalized_heuristic_fn(
    const Game& game);

}  // namespace searchlab
