#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace cellless {

inline constexpr double kFreeSpaceImpedance = 377.0;      // ohm
inline constexpr double kIcnirpWholeBodyLimit = 0.08;     // W/kg, general public
inline constexpr double kDefaultReferenceField = 2.45;    // V/m
inline constexpr double kDefaultReferenceBmi = 22.0;      // kg/m^2

/// Whole-body SAR reference data of one anatomical model.
struct PhantomProfile {
  std::string name;
  double bmi = kDefaultReferenceBmi;
  double bmi_ref = kDefaultReferenceBmi;
  double e_ref_vpm = kDefaultReferenceField;
  std::map<double, double> sar_ref;  // reference frequency [Hz] -> W/kg at e_ref
  std::string note;

  bool operator==(const PhantomProfile&) const = default;
};

/// Maps operating carrier frequencies onto the reference frequencies at
/// which SAR_ref is tabulated.
struct FrequencyMap {
  std::map<double, double> pairs;

  bool operator==(const FrequencyMap&) const = default;

  /// Throws UnmappedFrequency. Keys match within 1e-9 relative.
  double reference_for(double frequency_hz) const;
  bool contains(double frequency_hz) const;
};

/// Incident field strength at one operating frequency.
struct IncidentField {
  double frequency_hz = 0.0;
  double e_inc_vpm = 0.0;
};

struct Compliance {
  bool compliant = true;
  double margin = 0.0;  // limit - sar, W/kg
};

/// E_inc = sqrt(S Z0).
double incident_field(double power_density_wm2);

/// Whole-body SAR summed over frequencies:
/// (E_inc / E_ref)^2 * (BMI / BMI_ref) * SAR_ref(f_ref).
double sar_wb(std::span<const IncidentField> fields, const PhantomProfile& phantom,
              const FrequencyMap& freq_map);

Compliance compliance(double sar, double limit);

/// Reference SAR looked up with the same tolerance as FrequencyMap.
double reference_sar(const PhantomProfile& phantom, double reference_frequency_hz);

/// Virtual Population model names with illustrative values. The SAR_ref
/// numbers are placeholders, not dosimetry results.
std::vector<PhantomProfile> default_phantoms();

FrequencyMap default_frequency_map();

}  // namespace cellless
