#include <random>

#include "cellless/errors.hpp"
#include "cellless/exposure.hpp"
#include "cellless/radio_metrics.hpp"
#include "doctest.h"

using namespace cellless;

namespace {

PhantomProfile phantom() {
  PhantomProfile p;
  p.name = "test";
  p.bmi = 22.0;
  p.bmi_ref = 22.0;
  p.e_ref_vpm = 2.45;
  p.sar_ref = {{3.5e9, 0.004}, {5.2e9, 0.003}};
  return p;
}

FrequencyMap fmap() {
  FrequencyMap m;
  m.pairs = {{3e9, 3.5e9}, {5e9, 5.2e9}};
  return m;
}

}  // namespace

TEST_CASE("incident field") {
  CHECK(incident_field(0.0) == 0.0);
  CHECK(incident_field(1.0) == doctest::Approx(19.4165).epsilon(1e-5));
  CHECK(incident_field(4.0) == doctest::Approx(2.0 * incident_field(1.0)));
}

TEST_CASE("SAR identity and quadratic law") {
  const std::vector<IncidentField> ref{{3e9, 2.45}};
  CHECK(sar_wb(ref, phantom(), fmap()) == 0.004);
  const std::vector<IncidentField> twice{{3e9, 4.9}};
  CHECK(sar_wb(twice, phantom(), fmap()) == doctest::Approx(0.016));
  const std::vector<IncidentField> two{{3e9, 2.45}, {5e9, 2.45}};
  CHECK(sar_wb(two, phantom(), fmap()) == doctest::Approx(0.007));
  auto heavy = phantom();
  heavy.bmi = 33.0;
  CHECK(sar_wb(ref, heavy, fmap()) == doctest::Approx(0.006));
}

TEST_CASE("SAR scales with the square of the field") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(0.0, 10.0), e(0.01, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double k = c(rng);
    const std::vector<IncidentField> f{{3e9, e(rng)}, {5e9, e(rng)}};
    const std::vector<IncidentField> g{{3e9, k * f[0].e_inc_vpm}, {5e9, k * f[1].e_inc_vpm}};
    const double base = sar_wb(f, phantom(), fmap());
    const double scaled = sar_wb(g, phantom(), fmap());
    CHECK(std::abs(scaled - k * k * base) <= 1e-12 * std::max(scaled, 1e-300));
  }
}

TEST_CASE("unmapped frequency throws") {
  const std::vector<IncidentField> f{{28e9, 1.0}};
  CHECK_THROWS_AS(sar_wb(f, phantom(), fmap()), UnmappedFrequency);
}

TEST_CASE("compliance margin") {
  const auto ok = compliance(0.0, 0.08);
  CHECK(ok.compliant);
  CHECK(ok.margin == doctest::Approx(0.08));
  const auto bad = compliance(0.1, 0.08);
  CHECK_FALSE(bad.compliant);
  CHECK(bad.margin == doctest::Approx(-0.02));
}

TEST_CASE("power density") {
  CHECK(power_density(3e9, 0.0) == 0.0);
  const double lambda = 299792458.0 / 3e9;
  CHECK(power_density(3e9, lambda * lambda / (4 * kPi)) == doctest::Approx(1.0));
  CHECK(power_density(6e9, 1e-3) == doctest::Approx(4.0 * power_density(3e9, 1e-3)));
}

TEST_CASE("default phantoms cover the default frequency map") {
  const auto map = default_frequency_map();
  for (const auto& p : default_phantoms()) {
    for (const auto& [f, ref] : map.pairs) CHECK(reference_sar(p, ref) > 0.0);
  }
}
