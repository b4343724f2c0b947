#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "tailgame/errors.hpp"
#include "tailgame/json_io.hpp"

using namespace tailgame;

namespace {

ErrorCode code_of(const auto& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("writer formatting") {
  Json j;
  j["zeta"] = 0.1;
  j["alpha"] = std::vector<double>{1.0, 2.5};
  j["mid"] = std::numeric_limits<double>::infinity();
  j["nested"]["b"] = true;
  j["nested"]["a"] = "x";
  const std::string text = write_json(j);
  CHECK(text ==
        "{\n"
        "  \"alpha\": [1, 2.5],\n"
        "  \"mid\": null,\n"
        "  \"nested\": {\n"
        "    \"a\": \"x\",\n"
        "    \"b\": true\n"
        "  },\n"
        "  \"zeta\": 0.10000000000000001\n"
        "}\n");
  CHECK(write_json(j) == text);
  CHECK(parse_json(text)["zeta"].get<double>() == 0.1);
}

TEST_CASE("parse errors") {
  CHECK(code_of([] { parse_json("{\"a\": [1, 2"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { density_from_json(parse_json("{\"breakpoints\": [1, 2]}")); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { density_from_json(parse_json("{\"breakpoints\": [1, 2], \"pieces\": [[\"a\"]]}")); }) ==
        ErrorCode::InvalidInput);
  CHECK(code_of([] { density_from_json(parse_json("{\"breakpoints\": [1, 2], \"pieces\": [[1]], \"basis\": \"x\"}")); }) ==
        ErrorCode::InvalidInput);
}

TEST_CASE("density round trips") {
  const auto tri = density_from_json(parse_json(oracle::fixture("triangle.json")));
  CHECK(tri.continuous());
  CHECK(tri(1.25) == doctest::Approx(1.0));
  const auto again = density_from_json(density_to_json(tri));
  for (double x : {1.0, 1.1, 1.5, 1.9, 2.0}) CHECK(again(x) == tri(x));
  CHECK(again.continuous());

  const Json bern = parse_json(R"({"basis":"bernstein","breakpoints":[1,3],"pieces":[[0,1,0]]})");
  const auto b = density_from_json(bern);
  CHECK(b(2.0) == doctest::Approx(0.5));
  const Json out = density_to_json(b);
  CHECK(out["basis"] == "bernstein");
  CHECK(density_from_json(out)(1.7) == doctest::Approx(b(1.7)).epsilon(1e-15));
}

TEST_CASE("sample files") {
  const auto xs = parse_samples_csv("# header\n1.5\n\n 2.25 \n1e0\n");
  CHECK(xs == std::vector<double>{1.5, 2.25, 1.0});
  CHECK(parse_samples_csv("").empty());
  CHECK(code_of([] { parse_samples_csv("1.5\nabc\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_samples_csv("1.5,2\n"); }) == ErrorCode::ParseError);
  CHECK(parse_samples_csv(oracle::fixture("samples.csv")).size() == 200);
}

TEST_CASE("game files") {
  const auto g = game_from_json(parse_json(oracle::fixture("example.json")));
  CHECK(g.kind() == PayoffKind::Categorical);
  CHECK(g.rows() == 2);
  CHECK(g.stage_count() == 3);
  CHECK(g.categorical_cell(1, 0).mass() == std::vector<double>{0.8, 0.1, 0.1});

  const auto id = game_from_json(parse_json(oracle::fixture("identity3.json")));
  CHECK(id.kind() == PayoffKind::Stages);
  CHECK(id.stage_count() == 1);

  const auto dg = game_from_json(parse_json(oracle::fixture("density_game.json")));
  CHECK(dg.kind() == PayoffKind::Density);

  CHECK(code_of([] {
          game_from_json(parse_json(R"({"kind":"categorical","K":2,"rows":1,"cols":1,"payoffs":[[[0.5,0.2,0.3]]]})"));
        }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([] { game_from_json(parse_json(R"({"kind":"poker","payoffs":[]})")); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] {
          game_from_json(parse_json(R"({"kind":"stages","stages":[[[1]]],"row_player":"sideways"})"));
        }) == ErrorCode::InvalidInput);
  const auto mn = game_from_json(parse_json(R"({"kind":"stages","stages":[[[1,2],[3,4]]],"row_player":"minimize"})"));
  CHECK(mn.row_sense() == Sense::Minimize);
}

TEST_CASE("report serializers") {
  const auto g = game_from_json(parse_json(oracle::fixture("example.json")));
  const Json eq = lex_equilibrium_to_json(lex_equilibrium(g));
  CHECK(eq["profile"]["x"].size() == 2);
  CHECK(eq["stages"].size() == 3);
  CHECK(eq["stages"][0]["stage"] == 1);
  CHECK(eq["values"][0].get<double>() == doctest::Approx(0.3));

  const MixedProfile half{{0.5, 0.5}, {0.5, 0.5}};
  const Json nash = nash_report_to_json(verify_nash(g, half));
  CHECK(nash["is_nash"] == false);
  CHECK(nash["witness"]["player"] == "row");
  const Json lex = lex_nash_report_to_json(verify_lex_nash(g, half));
  CHECK(lex["is_lex_nash"] == true);

  const Json ord = ordering_to_json(Ordering{});
  CHECK(ord["order"] == "equal");
  CHECK(ord["witness"].is_null());
}
