#include "mmw/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mmw/errors.hpp"

namespace mmw {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad_config(const std::string& what) { throw DomainError("scenario config: " + what); }

double number(const json& j, const char* key) {
  if (!j.at(key).is_number()) bad_config(fmt::format("'{}' must be a number", key));
  return j.at(key).get<double>();
}

std::string text(const json& j, const char* key) {
  if (!j.at(key).is_string()) bad_config(fmt::format("'{}' must be a string", key));
  return j.at(key).get<std::string>();
}

void reject_unknown(const json& j, const std::set<std::string>& known, std::string_view where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) bad_config(fmt::format("unknown key '{}' in {}", key, where));
  }
}

LayerSpec parse_layer(const json& j, std::size_t index) {
  if (!j.is_object()) bad_config(fmt::format("layers[{}] must be an object", index));
  reject_unknown(j, {"tissue", "thickness_mm", "eps_real", "eps_imag"}, fmt::format("layers[{}]", index));
  if (!j.contains("tissue")) bad_config(fmt::format("layers[{}] needs a tissue", index));
  const auto name = text(j, "tissue");
  const auto tissue = parse_tissue(name);
  if (!tissue) bad_config(fmt::format("layers[{}]: unknown tissue '{}'", index, name));
  LayerSpec spec{*tissue, std::nullopt, std::nullopt, std::nullopt};
  if (j.contains("thickness_mm") && !j.at("thickness_mm").is_null()) spec.thickness_mm = number(j, "thickness_mm");
  if (j.contains("eps_real")) spec.eps_real = number(j, "eps_real");
  if (j.contains("eps_imag")) spec.eps_imag = number(j, "eps_imag");
  return spec;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    bad_config(e.what());
  }
  if (!doc.is_object()) bad_config("top level must be an object");
  reject_unknown(doc,
                 {"model", "layers", "frequency_GHz", "incident_pd_W_per_m2", "skin_model", "clothing_thickness_mm",
                  "air_temperature_C", "blood_temperature_C", "thermal_depth_mm", "sample_step_mm", "data_dir",
                  "output"},
                 "scenario");

  ScenarioConfig c;
  if (doc.contains("model")) {
    const auto name = text(doc, "model");
    const auto preset = parse_model_preset(name);
    if (!preset) bad_config(fmt::format("unknown model '{}'", name));
    c.preset = *preset;
  }
  if (doc.contains("layers")) {
    if (!doc.at("layers").is_array()) bad_config("'layers' must be an array");
    std::size_t i = 0;
    for (const auto& layer : doc.at("layers")) c.layers.push_back(parse_layer(layer, i++));
  }
  if (doc.contains("frequency_GHz")) c.frequency_ghz = number(doc, "frequency_GHz");
  if (doc.contains("incident_pd_W_per_m2")) c.incident_pd = number(doc, "incident_pd_W_per_m2");
  if (doc.contains("skin_model") && !doc.at("skin_model").is_null()) {
    const auto name = text(doc, "skin_model");
    c.skin_model = parse_skin_model(name);
    if (!c.skin_model) bad_config(fmt::format("unknown skin model '{}'", name));
  }
  if (doc.contains("clothing_thickness_mm")) c.clothing_thickness_mm = number(doc, "clothing_thickness_mm");
  if (doc.contains("air_temperature_C")) c.air_temperature = number(doc, "air_temperature_C");
  if (doc.contains("blood_temperature_C")) c.blood_temperature = number(doc, "blood_temperature_C");
  if (doc.contains("thermal_depth_mm")) c.thermal_depth_mm = number(doc, "thermal_depth_mm");
  if (doc.contains("sample_step_mm")) c.sample_step_mm = number(doc, "sample_step_mm");
  if (doc.contains("data_dir")) c.data_dir = text(doc, "data_dir");
  if (doc.contains("output")) c.output = text(doc, "output");
  return c;
}

ScenarioConfig ScenarioConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError(fmt::format("cannot open scenario config '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

void ScenarioConfig::validate() const {
  if (!(frequency_ghz > 0.0) || !std::isfinite(frequency_ghz)) bad_config("frequency_GHz must be positive");
  if (!(incident_pd >= 0.0) || !std::isfinite(incident_pd)) bad_config("incident_pd_W_per_m2 must be >= 0");
  if (!(clothing_thickness_mm >= 0.0) || !std::isfinite(clothing_thickness_mm)) {
    bad_config("clothing_thickness_mm must be >= 0");
  }
  if (!std::isfinite(air_temperature) || !std::isfinite(blood_temperature)) bad_config("temperatures must be finite");
  if (!(thermal_depth_mm > 0.0) || !std::isfinite(thermal_depth_mm)) bad_config("thermal_depth_mm must be positive");
  if (!(sample_step_mm > 0.0) || sample_step_mm > thermal_depth_mm) {
    bad_config("sample_step_mm must lie in (0, thermal_depth_mm]");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const bool last = i + 1 == layers.size();
    if (last == l.thickness_mm.has_value()) {
      bad_config(fmt::format("layers[{}]: only the last layer omits thickness_mm", i));
    }
    if (l.thickness_mm && !(*l.thickness_mm >= 0.0 && std::isfinite(*l.thickness_mm))) {
      bad_config(fmt::format("layers[{}]: thickness_mm must be >= 0", i));
    }
    if (l.eps_real.has_value() != l.eps_imag.has_value()) {
      bad_config(fmt::format("layers[{}]: give both eps_real and eps_imag or neither", i));
    }
  }
}

ThermalEnvironment ScenarioConfig::environment() const {
  ThermalEnvironment env;
  env.air_temperature = air_temperature;
  env.blood_temperature = blood_temperature;
  env.depth = thermal_depth_mm * 1e-3;
  return env;
}

DielectricDatabase ScenarioConfig::database() const {
  return data_dir ? DielectricDatabase::from_directory(*data_dir) : DielectricDatabase::bundled();
}

LayerStack ScenarioConfig::build_stack(const DielectricDatabase& db) const {
  validate();
  auto stack = [&] {
    if (layers.empty()) {
      // A zero-thickness garment is no garment: the skin faces air.
      return clothing_thickness_mm == 0.0 ? LayerStack::preset(unclothed(preset))
                                          : LayerStack::preset(preset, clothing_thickness_mm * 1e-3);
    }
    std::vector<TissueLayer> list;
    for (const auto& l : layers) {
      TissueLayer layer{l.tissue, l.thickness_mm ? *l.thickness_mm * 1e-3 : kSemiInfinite, std::nullopt};
      if (l.eps_real) layer.permittivity = ComplexPermittivity(*l.eps_real, *l.eps_imag);
      list.push_back(layer);
    }
    return LayerStack(std::move(list));
  }();
  if (skin_model) stack = stack.with_permittivity(Tissue::Skin, db.skin_model(*skin_model, frequency()).permittivity);
  return stack;
}

}  // namespace mmw
