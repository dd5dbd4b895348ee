#include <limits>

#include "cellless/solution.hpp"
#include "cellless/solver_ctm.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace cellless;

namespace {

SolutionState geometry_of(const Scenario& s) {
  CtmConfig c;
  c.seed = 1;
  return ctm_geometry(s, c);
}

}  // namespace

TEST_CASE("CtM geometry validates") {
  for (const auto& s : {fixture::small_hall(), fixture::shared_hall()}) {
    CHECK(validate(geometry_of(s), s).empty());
  }
  const auto b = builtin_scenario("inf-dh-desk", 1);
  CHECK(validate(geometry_of(b), b).empty());
}

TEST_CASE("narrow beam is reported by id") {
  const auto s = fixture::small_hall();
  auto sol = geometry_of(s);
  sol.beams[1].width = s.poas[0].min_beam_width / 2;
  const auto v = validate(sol, s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].variable == "beam[" + std::to_string(sol.beams[1].beam_id) + "].width");
}

TEST_CASE("omitted user is unserved") {
  const auto s = fixture::small_hall();
  auto sol = geometry_of(s);
  for (auto& b : sol.beams) {
    std::erase(b.served_users, 3);
  }
  const auto v = validate(sol, s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].variable == "user[3]");
  CHECK(v[0].message == "unserved user");
}

TEST_CASE("other structural violations") {
  const auto s = fixture::shared_hall();
  auto sol = geometry_of(s);
  sol.beams[0].owner_poa = 2;
  sol.tx_power_dbm[1] = 99.0;
  sol.tx_power_dbm.erase(3);
  const auto v = validate(sol, s);
  CHECK(v.size() == 3);
}

TEST_CASE("effective power") {
  const auto s = fixture::small_hall();
  auto sol = geometry_of(s);
  CHECK(poa_active(sol, 1));
  CHECK(effective_power_dbm(sol, 1) == 24.0);
  for (auto& b : sol.beams) b.served_users.clear();
  CHECK_FALSE(poa_active(sol, 1));
  CHECK(effective_power_dbm(sol, 1) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("solution JSON round trip") {
  const auto s = fixture::shared_hall();
  auto sol = geometry_of(s);
  sol.tx_power_dbm[2] = -std::numeric_limits<double>::infinity();
  sol.tx_power_dbm[3] = 3.0 / 7.0;
  const auto text = solution_to_json(sol);
  const auto back = parse_solution(text);
  CHECK(back.tx_power_dbm == sol.tx_power_dbm);
  REQUIRE(back.beams.size() == sol.beams.size());
  for (std::size_t i = 0; i < sol.beams.size(); ++i) {
    CHECK(back.beams[i].served_users == sol.beams[i].served_users);
    CHECK(back.beams[i].azimuth == doctest::Approx(sol.beams[i].azimuth).epsilon(1e-12));
    CHECK(back.beams[i].width == doctest::Approx(sol.beams[i].width).epsilon(1e-12));
  }
  CHECK(fixture::json_near(nlohmann::json::parse(solution_to_json(back)), nlohmann::json::parse(text)));
}
