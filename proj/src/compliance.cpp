#include "mmw/compliance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mmw/bundled_data.hpp"
#include "mmw/constants.hpp"
#include "mmw/errors.hpp"

namespace mmw {

namespace {

using json = nlohmann::json;

constexpr double kMinMeasurementDistance = 0.05;  // m

double ghz_of(Frequency f) { return f.in_hz() / 1e9; }

[[noreturn]] void bad_catalog(const std::string& what) { throw DomainError("limit catalog: " + what); }

double positive(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) bad_catalog(fmt::format("{}: missing number '{}'", where, key));
  const double v = j.at(key).get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) bad_catalog(fmt::format("{}: '{}' must be positive", where, key));
  return v;
}

std::pair<double, double> parse_band(const json& j, const std::string& where) {
  if (!j.contains("band_GHz") || !j.at("band_GHz").is_array() || j.at("band_GHz").size() != 2) {
    bad_catalog(where + ": band_GHz must be a [lo, hi] pair");
  }
  const double lo = j.at("band_GHz")[0].get<double>();
  const double hi = j.at("band_GHz")[1].get<double>();
  if (!(lo > 0.0 && hi > lo)) bad_catalog(where + ": band_GHz must satisfy 0 < lo < hi");
  return {lo, hi};
}

LimitCatalog::Quantity parse_quantity(const json& j, const std::string& where) {
  const auto kind = j.value("kind", std::string{});
  LimitCatalog::Quantity q;
  if (kind == "constant") {
    q.coefficient = positive(j, "value", where);
  } else if (kind == "power_law") {
    q.coefficient = positive(j, "coefficient", where);
    q.reference = positive(j, "reference", where);
    if (!j.contains("exponent") || !j.at("exponent").is_number()) bad_catalog(where + ": missing exponent");
    q.exponent = j.at("exponent").get<double>();
    const auto unit = j.value("frequency_unit", std::string{"GHz"});
    if (unit == "MHz") {
      q.mhz = true;
    } else if (unit != "GHz") {
      bad_catalog(fmt::format("{}: unknown frequency_unit '{}'", where, unit));
    }
  } else {
    bad_catalog(fmt::format("{}: unknown kind '{}'", where, kind));
  }
  return q;
}

LimitCatalog::Clause parse_clause(const json& j, const std::string& where) {
  LimitCatalog::Clause c{};
  const auto pop = parse_population(j.value("population", std::string{}));
  if (!pop) bad_catalog(where + ": unknown population");
  c.population = *pop;
  const auto& peak = j.at("localized_peak");
  if (peak.is_boolean()) {
    c.localized_peak = peak.get<bool>();
  } else if (!peak.is_null()) {
    bad_catalog(where + ": localized_peak must be true, false or null");
  }
  std::tie(c.band_lo_ghz, c.band_hi_ghz) = parse_band(j, where);
  c.pd = parse_quantity(j.at("pd"), where + ".pd");
  c.averaging_time = parse_quantity(j.at("averaging_time"), where + ".averaging_time");

  const auto& area = j.at("averaging_area");
  const auto kind = area.value("kind", std::string{});
  if (kind == "fixed") {
    c.area_kind = AveragingArea::Kind::Fixed;
    c.area_cm2 = positive(area, "value_cm2", where + ".averaging_area");
  } else if (kind == "wavelength_squared") {
    c.area_kind = AveragingArea::Kind::Fixed;
    c.area_wavelength_squared = true;
    c.area_cm2 = positive(area, "coefficient", where + ".averaging_area");
  } else if (kind == "projected_body") {
    c.area_kind = AveragingArea::Kind::ProjectedBody;
  } else if (kind == "unspecified") {
    c.area_kind = AveragingArea::Kind::Unspecified;
  } else {
    bad_catalog(fmt::format("{}: unknown averaging_area kind '{}'", where, kind));
  }
  c.source_clause = j.value("source_clause", std::string{});
  if (c.source_clause.empty()) bad_catalog(where + ": source_clause is required");
  return c;
}

bool in_band(double f, double lo, double hi, bool closed_top) {
  return f >= lo && (f < hi || (closed_top && f == hi));
}

}  // namespace

std::string_view to_string(Standard standard) {
  switch (standard) {
    case Standard::ICNIRP: return "ICNIRP";
    case Standard::FCC_MPE: return "FCC_MPE";
    case Standard::IEEE_1992_peak: return "IEEE_1992_peak";
    case Standard::IEEE_2005: return "IEEE_2005";
  }
  return "?";
}

std::string_view to_string(Population population) {
  return population == Population::Occupational_Controlled ? "occupational" : "general";
}

std::optional<Standard> parse_standard(std::string_view name) {
  for (const auto s : kAllStandards) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::optional<Population> parse_population(std::string_view name) {
  if (name == "general" || name == "uncontrolled" || name == "GeneralPublic_Uncontrolled") {
    return Population::GeneralPublic_Uncontrolled;
  }
  if (name == "occupational" || name == "controlled" || name == "Occupational_Controlled") {
    return Population::Occupational_Controlled;
  }
  return std::nullopt;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Compliant: return "Compliant";
    case Verdict::NonCompliant: return "NonCompliant";
    case Verdict::NearFieldIndeterminate: return "NearFieldIndeterminate";
  }
  return "?";
}

double LimitCatalog::Quantity::at(Frequency f) const {
  const double x = mhz ? f.in_hz() / 1e6 : ghz_of(f);
  return exponent == 0.0 ? coefficient : coefficient * std::pow(x / reference, exponent);
}

const LimitCatalog& LimitCatalog::bundled() {
  static const LimitCatalog catalog = from_json(bundled::kLimitCatalogJson);
  return catalog;
}

LimitCatalog LimitCatalog::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    bad_catalog(e.what());
  }
  if (doc.value("schema_version", 0) != 1) bad_catalog("unsupported schema_version");
  if (!doc.contains("standards") || !doc.at("standards").is_array()) bad_catalog("missing 'standards' array");

  LimitCatalog catalog;
  try {
    for (const auto& s : doc.at("standards")) {
      const auto id = s.value("id", std::string{});
      const auto standard = parse_standard(id);
      if (!standard) bad_catalog(fmt::format("unknown standard id '{}'", id));
      Entry e{*standard, s.value("title", id), 0.0, 0.0, {}};
      std::tie(e.band_lo_ghz, e.band_hi_ghz) = parse_band(s, id);
      std::size_t i = 0;
      for (const auto& c : s.at("clauses")) {
        auto clause = parse_clause(c, fmt::format("{}.clauses[{}]", id, i++));
        if (clause.band_lo_ghz < e.band_lo_ghz || clause.band_hi_ghz > e.band_hi_ghz) {
          bad_catalog(fmt::format("{}: clause band lies outside the standard's band", id));
        }
        e.clauses.push_back(std::move(clause));
      }
      catalog.entries_.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    bad_catalog(e.what());
  }
  return catalog;
}

LimitCatalog LimitCatalog::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError(fmt::format("cannot open limit catalog '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

const LimitCatalog::Entry& LimitCatalog::entry(Standard standard) const {
  const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.standard == standard; });
  if (it == entries_.end()) {
    throw OutOfScopeError(fmt::format("standard {} is not in the limit catalog", to_string(standard)), 0.0, 0.0);
  }
  return *it;
}

std::pair<double, double> LimitCatalog::band(Standard standard) const {
  const auto& e = entry(standard);
  return {e.band_lo_ghz, e.band_hi_ghz};
}

LimitRecord LimitCatalog::limit_for(const ExposureContext& context) const {
  const auto& e = entry(context.standard);
  const double f = ghz_of(context.frequency);
  if (!in_band(f, e.band_lo_ghz, e.band_hi_ghz, true)) {
    throw OutOfScopeError(fmt::format("{} GHz is outside the {} band {}-{} GHz", f, to_string(context.standard),
                                      e.band_lo_ghz, e.band_hi_ghz),
                          e.band_lo_ghz, e.band_hi_ghz);
  }
  for (const auto& c : e.clauses) {
    if (c.population != context.population) continue;
    if (c.localized_peak && *c.localized_peak != context.localized_peak) continue;
    if (!in_band(f, c.band_lo_ghz, c.band_hi_ghz, c.band_hi_ghz == e.band_hi_ghz)) continue;

    LimitRecord r;
    r.pd_limit = c.pd.at(context.frequency);
    r.averaging_time_min = c.averaging_time.at(context.frequency);
    r.averaging_area.kind = c.area_kind;
    if (c.area_kind == AveragingArea::Kind::Fixed) {
      double cm2 = c.area_cm2;
      if (c.area_wavelength_squared) {
        const double lambda_cm = constants::kSpeedOfLight / context.frequency.in_hz() * 100.0;
        cm2 *= lambda_cm * lambda_cm;
      }
      r.averaging_area.area_m2 = cm2 * 1e-4;
    }
    r.source_clause = c.source_clause;
    return r;
  }
  throw OutOfScopeError(fmt::format("{} has no {} {} clause at {} GHz (band {}-{} GHz)", to_string(context.standard),
                                    to_string(context.population),
                                    context.localized_peak ? "spatial-peak" : "whole-body", f, e.band_lo_ghz,
                                    e.band_hi_ghz),
                        e.band_lo_ghz, e.band_hi_ghz);
}

LimitRecord limit_for(const ExposureContext& context, const LimitCatalog& catalog) {
  return catalog.limit_for(context);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double fraunhofer_distance(double largest_dimension, Frequency frequency) {
  if (!(largest_dimension > 0.0) || !(frequency.in_hz() > 0.0)) {
    throw DomainError("aperture size and frequency must be positive");
  }
  const double lambda = constants::kSpeedOfLight / frequency.in_hz();
  return 2.0 * largest_dimension * largest_dimension / lambda;
}

double measurement_boundary(double largest_dimension, Frequency frequency) {
  return std::max(kMinMeasurementDistance, fraunhofer_distance(largest_dimension, frequency));
}

double far_field_pd(const DeviceFarFieldDescriptor& device, Frequency frequency) {
  if (!(device.radiated_power > 0.0) || !(device.antenna_gain > 0.0) || !(device.distance > 0.0)) {
    throw DomainError("radiated power, gain and distance must be positive");
  }
  const double boundary = fraunhofer_distance(device.largest_dimension, frequency);
  if (device.distance < boundary) {
    throw NearFieldError(
        fmt::format("distance {} m is inside the far-field boundary {} m", device.distance, boundary), boundary);
  }
  return device.antenna_gain * device.radiated_power / (4.0 * constants::kPi * device.distance * device.distance);
}

ComplianceReport evaluate(const DeviceFarFieldDescriptor& device, const ExposureContext& context,
                          const LimitCatalog& catalog) {
  ComplianceReport report;
  report.context = context;
  report.limit = catalog.limit_for(context);
  report.near_field_boundary = measurement_boundary(device.largest_dimension, context.frequency);
  if (!(device.distance > 0.0)) throw DomainError("distance must be positive");
  if (device.distance < report.near_field_boundary) {
    report.verdict = Verdict::NearFieldIndeterminate;
    return report;
  }
  const double pd = far_field_pd(device, context.frequency);
  report.power_density = pd;
  report.margin_db = 10.0 * std::log10(report.limit.pd_limit / pd);
  report.verdict = pd <= report.limit.pd_limit ? Verdict::Compliant : Verdict::NonCompliant;
  return report;
}

}  // namespace mmw
