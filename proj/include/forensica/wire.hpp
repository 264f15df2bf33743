#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "forensica/world.hpp"

namespace forensica {

inline constexpr std::string_view kWorldFileExtension = ".forensica.json";

// Canonical form: sorted keys, two-space indent, trailing newline. Serializing
// the same bundle always yields the same bytes.
std::string serialize_world(const WorldBundle& bundle);

// Throws Error(Parse) for malformed JSON, Error(Version) for an unknown
// format_version and CorruptWorldError (with a JSON-pointer path) for any
// broken invariant.
WorldBundle parse_world(std::string_view bytes);

WorldBundle strip_ground_truth(WorldBundle bundle);

// Re-checks every module invariant. Throws CorruptWorldError.
void validate_bundle(const WorldBundle& bundle);

void save_world_file(const std::string& path, const WorldBundle& bundle);
WorldBundle load_world_file(const std::string& path);

nlohmann::json bundle_to_json(const WorldBundle& bundle);
WorldBundle bundle_from_json(const nlohmann::json& j);

nlohmann::json tile_world_to_json(const TileWorld& world);
nlohmann::json object_to_json(const PlacedObject& o);
nlohmann::json coord_to_json(Coord c);
nlohmann::json ground_truth_to_json(const GroundTruth& truth);
nlohmann::json message_to_json(const RadioMessage& m);

}  // namespace forensica
