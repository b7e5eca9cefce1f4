#include "mmw/dielectrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "csv.hpp"
#include "mmw/bundled_data.hpp"
#include "mmw/constants.hpp"
#include "mmw/errors.hpp"

namespace mmw {

namespace {

struct SkinModelName {
  SkinModel model;
  std::string_view name;
};

constexpr SkinModelName kSkinModelNames[] = {
    {SkinModel::Gandhi, "gandhi"},
    {SkinModel::Gabriel, "gabriel"},
    {SkinModel::ChahatPalm, "chahat_palm"},
    {SkinModel::ChahatWristForearm, "chahat_wrist_forearm"},
    {SkinModel::AlekseevPalm, "alekseev_palm"},
    {SkinModel::AlekseevForearm, "alekseev_forearm"},
};

struct TissueName {
  Tissue tissue;
  std::string_view name;
};

constexpr TissueName kTissueNames[] = {
    {Tissue::Skin, "skin"},         {Tissue::SAT, "sat"},
    {Tissue::Muscle, "muscle"},     {Tissue::Bone, "bone"},
    {Tissue::Clothing, "clothing"}, {Tissue::Blood, "blood"},
};

// Tabulated frequencies are printed in whole GHz; compare with a relative slack.
bool same_frequency(Frequency a, Frequency b) {
  return std::abs(a.in_hz() - b.in_hz()) <= 1e-9 * std::max(a.in_hz(), b.in_hz());
}

double lerp(double x0, double y0, double x1, double y1, double x) {
  const double t = (x - x0) / (x1 - x0);
  return y0 + t * (y1 - y0);
}

void check_frequency(Frequency frequency) {
  if (!(frequency.in_hz() > 0.0) || !std::isfinite(frequency.in_hz())) {
    throw DomainError(fmt::format("frequency must be positive and finite, got {} Hz", frequency.in_hz()));
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError(fmt::format("cannot open data file '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ComplexPermittivity::ComplexPermittivity(double eps_real, double eps_imag)
    : eps_real_(eps_real), eps_imag_(eps_imag) {
  if (!(eps_real > 0.0) || !std::isfinite(eps_real)) {
    throw DomainError(fmt::format("relative permittivity must be positive, got {}", eps_real));
  }
  if (!(eps_imag >= 0.0) || !std::isfinite(eps_imag)) {
    throw DomainError(fmt::format("loss factor must be non-negative, got {}", eps_imag));
  }
}

std::string_view to_string(SkinModel model) {
  for (const auto& entry : kSkinModelNames) {
    if (entry.model == model) return entry.name;
  }
  return "unknown";
}

std::string_view to_string(Tissue tissue) {
  for (const auto& entry : kTissueNames) {
    if (entry.tissue == tissue) return entry.name;
  }
  return "unknown";
}

std::optional<SkinModel> parse_skin_model(std::string_view name) {
  for (const auto& entry : kSkinModelNames) {
    if (entry.name == name) return entry.model;
  }
  return std::nullopt;
}

std::optional<Tissue> parse_tissue(std::string_view name) {
  for (const auto& entry : kTissueNames) {
    if (entry.name == name) return entry.tissue;
  }
  return std::nullopt;
}

double sigma_to_eps_imag(double sigma, Frequency frequency) {
  check_frequency(frequency);
  if (!(sigma >= 0.0)) throw DomainError(fmt::format("conductivity must be non-negative, got {}", sigma));
  return sigma / (2.0 * constants::kPi * frequency.in_hz() * constants::kVacuumPermittivity);
}

double eps_imag_to_sigma(double eps_imag, Frequency frequency) {
  check_frequency(frequency);
  if (!(eps_imag >= 0.0)) throw DomainError(fmt::format("loss factor must be non-negative, got {}", eps_imag));
  return eps_imag * 2.0 * constants::kPi * frequency.in_hz() * constants::kVacuumPermittivity;
}

const DielectricDatabase& DielectricDatabase::bundled() {
  static const DielectricDatabase db =
      from_csv(bundled::kSkinModelsCsv, bundled::kTissueDielectricCsv, bundled::kTissueThermalCsv);
  return db;
}

DielectricDatabase DielectricDatabase::from_csv(std::string_view skin_models_csv,
                                                std::string_view tissue_dielectric_csv,
                                                std::string_view tissue_thermal_csv) {
  DielectricDatabase db;

  const auto skin = detail::CsvTable::parse(skin_models_csv, "skin_models.csv");
  for (std::size_t r = 0; r < skin.rows(); ++r) {
    const auto name = skin.cell(r, "model");
    const auto model = parse_skin_model(name);
    if (!model) throw DomainError(fmt::format("skin_models.csv: unknown model '{}'", name));
    db.skin_models_.push_back({*model, Frequency::ghz(skin.number(r, "frequency_GHz")),
                               ComplexPermittivity(skin.number(r, "eps_real"), skin.number(r, "eps_imag"))});
  }

  const auto diel = detail::CsvTable::parse(tissue_dielectric_csv, "tissue_dielectric.csv");
  for (std::size_t r = 0; r < diel.rows(); ++r) {
    const auto name = diel.cell(r, "tissue");
    const auto tissue = parse_tissue(name);
    if (!tissue) throw DomainError(fmt::format("tissue_dielectric.csv: unknown tissue '{}'", name));
    TissueDielectricRecord rec{*tissue, std::nullopt, diel.number(r, "eps_real"),
                               diel.optional_number(r, "sigma_S_per_m"), diel.optional_number(r, "eps_imag")};
    if (diel.cell(r, "frequency_GHz") != "*") rec.frequency = Frequency::ghz(diel.number(r, "frequency_GHz"));
    if (rec.sigma.has_value() == rec.eps_imag.has_value()) {
      throw DomainError(fmt::format("tissue_dielectric.csv: row {} needs exactly one of sigma / eps_imag", r + 1));
    }
    if (rec.eps_imag && rec.frequency) {
      throw DomainError(fmt::format("tissue_dielectric.csv: row {}: eps_imag rows must use frequency '*'", r + 1));
    }
    if (rec.sigma && *rec.sigma < 0.0) throw DomainError("tissue_dielectric.csv: negative conductivity");
    (void)ComplexPermittivity(rec.eps_real, rec.eps_imag.value_or(0.0));
    db.dielectric_.push_back(rec);
  }

  const auto therm = detail::CsvTable::parse(tissue_thermal_csv, "tissue_thermal.csv");
  for (std::size_t r = 0; r < therm.rows(); ++r) {
    const auto name = therm.cell(r, "tissue");
    const auto tissue = parse_tissue(name);
    if (!tissue) throw DomainError(fmt::format("tissue_thermal.csv: unknown tissue '{}'", name));
    TissueThermalRecord rec{*tissue,
                            therm.number(r, "density_kg_per_m3"),
                            therm.number(r, "specific_heat_J_per_kg_C"),
                            therm.number(r, "thermal_conductivity_W_per_m_C"),
                            therm.number(r, "perfusion_mL_per_kg_min"),
                            therm.number(r, "metabolic_heat_W_per_m3"),
                            std::nullopt};
    if (auto mm = therm.optional_number(r, "thickness_mm")) rec.thickness = *mm * 1e-3;
    if (!(rec.density > 0.0 && rec.specific_heat > 0.0 && rec.thermal_conductivity > 0.0)) {
      throw DomainError(fmt::format("tissue_thermal.csv: {} needs positive density, specific heat and conductivity", name));
    }
    if (rec.perfusion < 0.0 || rec.metabolic_heat < 0.0) {
      throw DomainError(fmt::format("tissue_thermal.csv: {} has negative perfusion or metabolic heat", name));
    }
    db.thermal_.push_back(rec);
  }

  auto by_frequency = [](const auto& a, const auto& b) { return a.frequency < b.frequency; };
  std::stable_sort(db.skin_models_.begin(), db.skin_models_.end(), by_frequency);
  std::stable_sort(db.dielectric_.begin(), db.dielectric_.end(), by_frequency);
  return db;
}

DielectricDatabase DielectricDatabase::from_directory(const std::filesystem::path& directory) {
  auto load = [&](std::string_view file, std::string_view fallback) {
    const auto path = directory / file;
    return std::filesystem::exists(path) ? read_file(path) : std::string(fallback);
  };
  return from_csv(load("skin_models.csv", bundled::kSkinModelsCsv),
                  load("tissue_dielectric.csv", bundled::kTissueDielectricCsv),
                  load("tissue_thermal.csv", bundled::kTissueThermalCsv));
}

PermittivityLookup DielectricDatabase::skin_model(SkinModel model, Frequency frequency) const {
  check_frequency(frequency);
  std::vector<const SkinModelRecord*> rows;
  for (const auto& rec : skin_models_) {
    if (rec.model == model) rows.push_back(&rec);
  }
  if (rows.empty()) throw OutOfRangeError(fmt::format("no data for skin model '{}'", to_string(model)));

  for (const auto* rec : rows) {
    if (same_frequency(rec->frequency, frequency)) return {rec->permittivity, false};
  }
  if (frequency < rows.front()->frequency || frequency > rows.back()->frequency) {
    throw OutOfRangeError(fmt::format("skin model '{}' is tabulated on [{}, {}] GHz, requested {} GHz",
                                      to_string(model), rows.front()->frequency.in_ghz(),
                                      rows.back()->frequency.in_ghz(), frequency.in_ghz()));
  }
  const auto hi = std::find_if(rows.begin(), rows.end(), [&](auto* r) { return r->frequency > frequency; });
  const auto* a = *(hi - 1);
  const auto* b = *hi;
  const double f = frequency.in_hz();
  const double f0 = a->frequency.in_hz();
  const double f1 = b->frequency.in_hz();
  return {ComplexPermittivity(lerp(f0, a->permittivity.eps_real(), f1, b->permittivity.eps_real(), f),
                              lerp(f0, a->permittivity.eps_imag(), f1, b->permittivity.eps_imag(), f)),
          true};
}

PermittivityLookup DielectricDatabase::tissue(Tissue tissue, Frequency frequency) const {
  check_frequency(frequency);
  std::vector<const TissueDielectricRecord*> rows;
  for (const auto& rec : dielectric_) {
    if (rec.tissue != tissue) continue;
    if (!rec.frequency) return {ComplexPermittivity(rec.eps_real, *rec.eps_imag), false};
    rows.push_back(&rec);
  }
  if (rows.empty()) throw OutOfRangeError(fmt::format("no dielectric data for tissue '{}'", to_string(tissue)));

  auto permittivity = [&](double eps_real, double sigma) {
    return ComplexPermittivity(eps_real, sigma_to_eps_imag(sigma, frequency));
  };
  for (const auto* rec : rows) {
    if (same_frequency(*rec->frequency, frequency)) return {permittivity(rec->eps_real, *rec->sigma), false};
  }
  const auto lo = *rows.front()->frequency;
  const auto hi_f = *rows.back()->frequency;
  if (frequency < lo || frequency > hi_f) {
    throw OutOfRangeError(fmt::format("tissue '{}' is tabulated on [{}, {}] GHz, requested {} GHz",
                                      to_string(tissue), lo.in_ghz(), hi_f.in_ghz(), frequency.in_ghz()));
  }
  const auto hi = std::find_if(rows.begin(), rows.end(), [&](auto* r) { return *r->frequency > frequency; });
  const auto* a = *(hi - 1);
  const auto* b = *hi;
  const double f = frequency.in_hz();
  const double f0 = a->frequency->in_hz();
  const double f1 = b->frequency->in_hz();
  return {permittivity(lerp(f0, a->eps_real, f1, b->eps_real, f), lerp(f0, *a->sigma, f1, *b->sigma, f)), true};
}

const TissueThermalRecord& DielectricDatabase::thermal(Tissue tissue) const {
  for (const auto& rec : thermal_) {
    if (rec.tissue == tissue) return rec;
  }
  throw OutOfRangeError(fmt::format("no thermal data for tissue '{}'", to_string(tissue)));
}

PermittivityLookup lookup_skin_model(SkinModel model, Frequency frequency) {
  return DielectricDatabase::bundled().skin_model(model, frequency);
}

}  // namespace mmw
