#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmw/units.hpp"

namespace mmw {

enum class Standard { ICNIRP, FCC_MPE, IEEE_1992_peak, IEEE_2005 };
enum class Population { GeneralPublic_Uncontrolled, Occupational_Controlled };

inline constexpr Standard kAllStandards[] = {Standard::ICNIRP, Standard::FCC_MPE, Standard::IEEE_1992_peak,
                                             Standard::IEEE_2005};

std::string_view to_string(Standard standard);
std::string_view to_string(Population population);
std::optional<Standard> parse_standard(std::string_view name);
/// Accepts "general", "uncontrolled", "occupational", "controlled" and the enumerator names.
std::optional<Population> parse_population(std::string_view name);

struct ExposureContext {
  Standard standard = Standard::ICNIRP;
  Population population = Population::GeneralPublic_Uncontrolled;
  Frequency frequency;
  bool localized_peak = false;
};

struct AveragingArea {
  enum class Kind { Fixed, ProjectedBody, Unspecified };
  Kind kind = Kind::Unspecified;
  double area_m2 = 0.0;  // meaningful for Kind::Fixed only
};

struct LimitRecord {
  double pd_limit = 0.0;  // W/m^2
  AveragingArea averaging_area;
  double averaging_time_min = 0.0;
  std::string source_clause;
};

/// Regulatory power-density limits, loaded from a JSON catalog (see docs/data_format.md).
class LimitCatalog {
 public:
  static const LimitCatalog& bundled();
  static LimitCatalog from_json(std::string_view text);
  static LimitCatalog from_file(const std::filesystem::path& path);

  /// Limit applying to `context`. Throws OutOfScopeError naming the band when the
  /// frequency or exposure class is not covered.
  LimitRecord limit_for(const ExposureContext& context) const;

  /// Applicability band of a standard, GHz.
  std::pair<double, double> band(Standard standard) const;

  struct Quantity {
    double coefficient = 0.0;
    double reference = 1.0;
    double exponent = 0.0;
    bool mhz = false;

    double at(Frequency f) const;
  };

  struct Clause {
    Population population;
    std::optional<bool> localized_peak;  // nullopt: applies to both
    double band_lo_ghz;
    double band_hi_ghz;
    Quantity pd;
    AveragingArea::Kind area_kind;
    double area_cm2 = 0.0;  // fixed area, or the lambda^2 multiplier
    bool area_wavelength_squared = false;
    Quantity averaging_time;
    std::string source_clause;
  };

  struct Entry {
    Standard standard;
    std::string title;
    double band_lo_ghz;
    double band_hi_ghz;
    std::vector<Clause> clauses;
  };

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;

  const Entry& entry(Standard standard) const;
};

LimitRecord limit_for(const ExposureContext& context, const LimitCatalog& catalog = LimitCatalog::bundled());

struct DeviceFarFieldDescriptor {
  double radiated_power;     // W
  double antenna_gain;       // linear
  double largest_dimension;  // m
  double distance;           // m
};

double db_to_linear(double db);

/// 2 D^2 / lambda, metres.
double fraunhofer_distance(double largest_dimension, Frequency frequency);

/// Nearest distance at which a power-density verdict is given: max(5 cm, Fraunhofer distance).
double measurement_boundary(double largest_dimension, Frequency frequency);

/// G P / (4 pi d^2). Throws NearFieldError when d is inside the Fraunhofer distance.
double far_field_pd(const DeviceFarFieldDescriptor& device, Frequency frequency);

enum class Verdict { Compliant, NonCompliant, NearFieldIndeterminate };
std::string_view to_string(Verdict verdict);

struct ComplianceReport {
  ExposureContext context;
  LimitRecord limit;
  std::optional<double> power_density;  // W/m^2; empty in the near field
  Verdict verdict = Verdict::NearFieldIndeterminate;
  std::optional<double> margin_db;  // 10 log10(limit / PD); positive is below the limit
  double near_field_boundary = 0.0;  // m
};

ComplianceReport evaluate(const DeviceFarFieldDescriptor& device, const ExposureContext& context,
                          const LimitCatalog& catalog = LimitCatalog::bundled());

}  // namespace mmw
