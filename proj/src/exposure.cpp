#include "cellless/exposure.hpp"

#include <cmath>
#include <stdexcept>

#include "cellless/errors.hpp"

namespace cellless {

namespace {

template <typename Map>
auto find_frequency(const Map& m, double f) {
  for (auto it = m.begin(); it != m.end(); ++it) {
    if (std::abs(it->first - f) <= 1e-9 * std::max(std::abs(f), 1.0)) return it;
  }
  return m.end();
}

}  // namespace

double FrequencyMap::reference_for(double frequency_hz) const {
  auto it = find_frequency(pairs, frequency_hz);
  if (it == pairs.end()) throw UnmappedFrequency(frequency_hz);
  return it->second;
}

bool FrequencyMap::contains(double frequency_hz) const {
  return find_frequency(pairs, frequency_hz) != pairs.end();
}

double incident_field(double power_density_wm2) {
  return std::sqrt(std::max(power_density_wm2, 0.0) * kFreeSpaceImpedance);
}

double reference_sar(const PhantomProfile& phantom, double reference_frequency_hz) {
  auto it = find_frequency(phantom.sar_ref, reference_frequency_hz);
  if (it == phantom.sar_ref.end()) throw UnmappedFrequency(reference_frequency_hz);
  return it->second;
}

double sar_wb(std::span<const IncidentField> fields, const PhantomProfile& phantom,
              const FrequencyMap& freq_map) {
  const double bmi_ratio = phantom.bmi / phantom.bmi_ref;
  double total = 0.0;
  for (const auto& f : fields) {
    const double ref = reference_sar(phantom, freq_map.reference_for(f.frequency_hz));
    const double ratio = f.e_inc_vpm / phantom.e_ref_vpm;
    total += ratio * ratio * bmi_ratio * ref;
  }
  return total;
}

Compliance compliance(double sar, double limit) {
  if (!(limit > 0.0)) throw std::invalid_argument("SAR limit must be positive");
  return {sar <= limit, limit - sar};
}

std::vector<PhantomProfile> default_phantoms() {
  // BMI from the models' published height and mass; SAR_ref values are
  // order-of-magnitude placeholders at E_ref = 2.45 V/m.
  const char* note = "placeholder SAR_ref, not authoritative";
  auto make = [&](const char* name, double bmi, double s245, double s35, double s52) {
    PhantomProfile p;
    p.name = name;
    p.bmi = bmi;
    p.bmi_ref = kDefaultReferenceBmi;
    p.e_ref_vpm = kDefaultReferenceField;
    p.sar_ref = {{2.45e9, s245}, {3.5e9, s35}, {5.2e9, s52}};
    p.note = note;
    return p;
  };
  return {
      make("Ella", 21.6, 1.2e-4, 1.1e-4, 1.0e-4),
      make("Duke", 22.4, 1.1e-4, 1.0e-4, 0.9e-4),
      make("Billie", 15.7, 1.5e-4, 1.4e-4, 1.3e-4),
      make("Thelonious", 13.6, 1.8e-4, 1.7e-4, 1.6e-4),
  };
}

FrequencyMap default_frequency_map() {
  return FrequencyMap{{{3.0e9, 2.45e9}, {3.5e9, 3.5e9}, {5.0e9, 5.2e9}, {5.2e9, 5.2e9}}};
}

}  // namespace cellless
