#pragma once

#include "panelcast/lstm.hpp"
#include "panelcast/pipeline.hpp"
#include "panelcast/synth.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace panelcast {

using Json = nlohmann::ordered_json;

Json to_json(const NetworkConfig& c);
Json to_json(const StlConfig& c);
Json to_json(const WindowSpec& w);
/// Everything except `execution`, which never changes results.
Json to_json(const PipelineConfig& c);
Json to_json(const SynthSpec& s);

/// Readers fill the given defaults from a JSON object. Unknown keys and
/// wrongly typed values raise SchemaError naming the key.
void from_json(const Json& j, NetworkConfig& c);
void from_json(const Json& j, StlConfig& c);
void from_json(const Json& j, WindowSpec& w);
void from_json(const Json& j, PipelineConfig& c);
void from_json(const Json& j, SynthSpec& s);

Json to_json(const NetworkParameters& p);
/// Throws SchemaError when the stored values do not fit the stored shape.
NetworkParameters parameters_from_json(const Json& j);

/// Writes `manifest.json` plus `params/<group>_seed<k>.json`. Output depends
/// only on the model, so two identical fits give byte-identical directories.
void save_model(const TrainedModel& model, const std::filesystem::path& dir);

/// Reloads a saved model bit-exactly. Throws SchemaError on malformed files.
TrainedModel load_model(const std::filesystem::path& dir);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace panelcast
