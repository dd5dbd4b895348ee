#include "cellless/errors.hpp"
#include "cellless/scenario.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

using namespace cellless;

TEST_CASE("built-in templates validate and place deterministically") {
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    const auto t = builtin_template(name);
    CHECK(t.users.empty());
    REQUIRE(t.placement);
    const auto a = builtin_scenario(name, 4);
    const auto b = builtin_scenario(name, 4);
    CHECK(a == b);
    CHECK(static_cast<int>(a.users.size()) == t.placement->n_users);
    CHECK(static_cast<int>(a.humans.size()) == t.placement->n_humans);
    const auto c = builtin_scenario(name, 5);
    CHECK_FALSE(a.users == c.users);
    CHECK_NOTHROW(validate_scenario(a));
  }
  CHECK_THROWS_AS(builtin_template("nope"), std::invalid_argument);
}

TEST_CASE("placement with zero users") {
  auto t = builtin_template("inf-dh-desk");
  t.placement->n_users = 0;
  t.placement->n_linked_humans = 0;
  const auto s = generate_placements(t, 1);
  CHECK(s.users.empty());
  CHECK(s.humans.size() == static_cast<std::size_t>(t.placement->n_humans));
}

TEST_CASE("linked humans share their user's position") {
  const auto s = builtin_scenario("inf-dh-desk", 2);
  int linked = 0;
  for (const auto& h : s.humans) {
    if (!h.linked_user) continue;
    ++linked;
    CHECK(s.user(*h.linked_user).position == h.position);
  }
  CHECK(linked == s.placement->n_linked_humans);
}

TEST_CASE("urban placements keep the minimum PoA distance") {
  const auto s = builtin_scenario("umi-sc-desk", 3);
  for (const auto& u : s.users) {
    for (const auto& p : s.poas) CHECK(distance_2d(u.position, p.position) >= s.min_poa_user_distance_m);
  }
}

TEST_CASE("scenario JSON round trip") {
  for (const auto& s : {fixture::shared_hall(), builtin_scenario("umi-sc-desk", 9)}) {
    const auto text = scenario_to_json(s);
    const auto back = parse_scenario(text);
    CHECK(back.users == s.users);
    CHECK(back.humans == s.humans);
    CHECK(back.phantoms == s.phantoms);
    CHECK(back.poas.size() == s.poas.size());
    CHECK(fixture::json_near(nlohmann::json::parse(scenario_to_json(back)), nlohmann::json::parse(text)));
  }
}

TEST_CASE("invalid clutter density names the field") {
  auto j = nlohmann::json::parse(scenario_to_json(fixture::small_hall()));
  j["clutter"]["density"] = 1.2;
  try {
    parse_scenario(j.dump());
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "clutter.density");
  }
}

TEST_CASE("parse errors carry the path") {
  auto j = nlohmann::json::parse(scenario_to_json(fixture::small_hall()));
  j["poas"][0]["frequency_hz"] = "fast";
  try {
    parse_scenario(j.dump());
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("poas[0]") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario("{not json"), ParseError);
}

TEST_CASE("schema version is checked") {
  auto j = nlohmann::json::parse(scenario_to_json(fixture::small_hall()));
  j["schema_version"] = 99;
  CHECK_THROWS_AS(parse_scenario(j.dump()), ValidationError);
}

TEST_CASE("validation catches structural errors") {
  auto s = fixture::small_hall();
  s.humans[1].position.x += 1.0;
  CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  s = fixture::small_hall();
  s.poas[0].frequency_hz = 28e9;
  CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  s = fixture::small_hall();
  s.users.push_back(s.users[0]);
  CHECK_THROWS_AS(validate_scenario(s), ValidationError);
  s = fixture::small_hall();
  s.humans[0].phantom = "nobody";
  CHECK_THROWS_AS(validate_scenario(s), ValidationError);
}

TEST_CASE("lookups") {
  const auto s = fixture::shared_hall();
  CHECK(s.beam_owner(3) == 2);
  CHECK(s.all_beams() == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(s.poa(3).frequency_hz == 3e9);
  CHECK_THROWS_AS(s.poa(9), std::out_of_range);
}
