#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "postmm/config.hpp"
#include "postmm/errors.hpp"

using namespace postmm;
using namespace postmm::config;

namespace {

const char* minimal = R"({
  "waveguide": {"preset": "WR-62"},
  "elements": [{"type": "post", "radius": 2, "offset": 3}]
})";

std::vector<std::string> problems_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& problems, std::string_view needle) {
  return std::any_of(problems.begin(), problems.end(),
                     [&](const std::string& p) { return p.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("WR-62 preset and defaults") {
  const RunConfig cfg = parse_config(minimal);
  CHECK(cfg.waveguide.preset == "WR-62");
  CHECK(cfg.waveguide.a == 15.799);
  CHECK(cfg.waveguide.b == 7.899);
  const Waveguide wg = cfg.waveguide_si();
  CHECK(wg.a == doctest::Approx(15.799e-3).epsilon(1e-15));
  CHECK(wg.b == doctest::Approx(7.899e-3).epsilon(1e-15));
  CHECK(cfg.sweep == SweepSpec{12.4, 18.0, 201});
  CHECK(cfg.f_start() == 12.4e9);
  CHECK(cfg.f_stop() == 18e9);
  CHECK(cfg.numerics.modes == 60);
  CHECK(cfg.output.params == known_params);
}

TEST_CASE("post offsets convert to wall distances") {
  const Network net = parse_config(minimal).network();
  REQUIRE(net.elements.size() == 1);
  const auto& j = std::get<PostJunction>(net.elements[0]);
  CHECK(j.h == doctest::Approx(10.8995e-3).epsilon(1e-14));
  CHECK(j.R == doctest::Approx(2e-3).epsilon(1e-15));

  const RunConfig wall = parse_config(R"({"waveguide": {"a": 20, "b": 10},
    "elements": [{"type": "post", "radius": 1, "wall": 4}, {"type": "guide", "length": 7.5},
                 {"type": "post", "radius": 1.5, "offset": -2}]})");
  const Network n2 = wall.network();
  REQUIRE(n2.elements.size() == 3);
  CHECK(n2.wg.a == doctest::Approx(20e-3));
  CHECK(std::get<PostJunction>(n2.elements[0]).h == doctest::Approx(4e-3));
  CHECK(std::get<UniformGuide>(n2.elements[1]).length == doctest::Approx(7.5e-3));
  CHECK(std::get<PostJunction>(n2.elements[2]).h == doctest::Approx(8e-3));
}

TEST_CASE("numerics map onto solver options") {
  const RunConfig cfg = parse_config(R"({"waveguide": {"preset": "WR-62"},
    "elements": [{"type": "post", "radius": 2, "offset": 3}],
    "numerics": {"modes": 30, "k_d": 20, "k_u": 8, "k_c": 12, "quad_order": 16, "balance_rows": false}})");
  const SolverOptions opt = cfg.solver_options();
  REQUIRE(opt.disc.fixed);
  CHECK(*opt.disc.fixed == Discretization{20, 8, 12});
  CHECK(opt.quad_order == 16);
  CHECK_FALSE(opt.balance_rows);
  CHECK(parse_config(minimal).solver_options() == SolverOptions{});
}

TEST_CASE("oversized post is rejected") {
  const auto p = problems_of(R"({"waveguide": {"preset": "WR-62"},
    "elements": [{"type": "post", "radius": 9, "offset": 0}]})");
  REQUIRE(p.size() == 1);
  CHECK(mentions(p, "does not fit"));
}

TEST_CASE("empty element list is rejected") {
  CHECK_THROWS_AS(parse_config(R"({"waveguide": {"preset": "WR-62"}, "elements": []})"), ValidationError);
  CHECK(mentions(problems_of(R"({"waveguide": {"preset": "WR-62"}})"), "at least one element"));
}

TEST_CASE("every problem is reported") {
  const auto p = problems_of(R"({
    "waveguide": {"preset": "WR-62", "colour": "red"},
    "elements": [
      {"type": "post", "radius": 2},
      {"type": "guide", "length": 1},
      {"type": "post", "radius": 2, "offset": 1, "wall": 3},
      {"type": "stub"}
    ],
    "sweep": {"start": 18, "stop": 12, "points": 0},
    "numerics": {"modes": 0, "k_d": 5},
    "output": {"params": ["S11", "S31", "S11"]}
  })");
  CHECK(mentions(p, "waveguide.colour: unknown key"));
  CHECK(mentions(p, "elements[0]: give exactly one of offset or wall"));
  CHECK(mentions(p, "elements[2]: give exactly one of offset or wall"));
  CHECK(mentions(p, "elements[3].type"));
  CHECK(mentions(p, "sweep.points must be >= 1"));
  CHECK(mentions(p, "numerics.modes must be >= 1"));
  CHECK(mentions(p, "give all of k_d, k_u, k_c or none"));
  CHECK(mentions(p, "unknown parameter 'S31'"));
  CHECK(mentions(p, "duplicate parameter 'S11'"));
  CHECK(p.size() >= 9);
}

TEST_CASE("overlapping posts and bad sweeps") {
  const auto p = problems_of(R"({"waveguide": {"preset": "WR-62"},
    "elements": [{"type": "post", "radius": 2, "offset": 3}, {"type": "guide", "length": 3},
                 {"type": "post", "radius": 2, "offset": -3}],
    "sweep": {"start": 18, "stop": 12, "points": 11}})");
  CHECK(mentions(p, "below the sum of radii"));
  CHECK(mentions(p, "sweep.stop must exceed sweep.start"));
  CHECK(problems_of(R"({"waveguide": {"preset": "WR-62"},
    "elements": [{"type": "post", "radius": 2, "offset": 3}], "sweep": {"start": 15, "stop": 15, "points": 1}})").empty());
}

TEST_CASE("waveguide problems") {
  CHECK(mentions(problems_of(R"({"waveguide": {"preset": "WR-90"}, "elements": [{"type": "guide", "length": 1}]})"),
                 "unknown preset"));
  CHECK(mentions(problems_of(R"({"waveguide": {"preset": "WR-62", "a": 20}, "elements": [{"type": "guide", "length": 1}]})"),
                 "contradict preset"));
  CHECK(mentions(problems_of(R"({"waveguide": {"a": 0, "b": 1, "eps_r": 0.5}, "elements": [{"type": "guide", "length": 1}]})"),
                 "waveguide.eps_r must be >= 1"));
  CHECK(mentions(problems_of(R"({"elements": [{"type": "guide", "length": 1}]})"), "section is required"));
  CHECK(mentions(problems_of(R"({"waveguide": {"a": "wide", "b": 1}, "elements": [{"type": "guide", "length": 1}]})"),
                 "waveguide.a: expected a number"));
  CHECK(mentions(problems_of(R"({"waveguide": {"preset": "WR-62"}, "elements": [{"type": "guide", "length": 1}],
                                 "sweep": {"points": 2.5}})"),
                 "sweep.points: expected an integer"));
}

TEST_CASE("malformed text reports the line") {
  try {
    parse_config("{\n  \"waveguide\": {\"preset\": \"WR-62\"},\n  \"elements\": [,]\n}");
    FAIL("no exception");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).rfind("line 3: ", 0) == 0);
  }
  CHECK_THROWS_AS(parse_config("[1, 2]"), ParseError);
  CHECK_THROWS_AS(parse_config(""), ParseError);
  // comments are allowed
  CHECK_NOTHROW(parse_config(R"({
    // width from the preset
    "waveguide": {"preset": "WR-62"}, /* one post */
    "elements": [{"type": "post", "radius": 2, "offset": 3}]})"));
}

TEST_CASE("serialization round trip") {
  CHECK(parse_config(serialize(parse_config(minimal))) == parse_config(minimal));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    RunConfig cfg;
    if (trial % 3 == 0) {
      cfg.waveguide = {"WR-62", 15.799, 7.899, 1.0, 1.0};
    } else {
      cfg.waveguide = {"", 10.0 + 20.0 * u(rng), 1.0 + 9.0 * u(rng), 1.0 + u(rng), 1.0 + u(rng)};
    }
    const double a = cfg.waveguide.a;
    const int posts = 1 + trial % 4;
    for (int i = 0; i < posts; ++i) {
      if (i > 0) cfg.elements.emplace_back(GuideSpec{5.0 + 10.0 * u(rng)});
      PostSpec p;
      p.radius = 0.2 + 1.5 * u(rng);
      if (u(rng) < 0.5) p.offset = (u(rng) - 0.5) * (0.5 * a - 2.0 * p.radius);
      else p.wall = 0.5 * a + (u(rng) - 0.5) * (0.5 * a - 2.0 * p.radius);
      cfg.elements.emplace_back(p);
    }
    cfg.sweep = {8.0 + u(rng), 20.0 + u(rng), 1 + trial};
    cfg.numerics.modes = 10 + trial;
    cfg.numerics.k_factor = 1.0 + u(rng);
    if (trial % 2) {
      cfg.numerics.k_d = 30;
      cfg.numerics.k_u = 20;
      cfg.numerics.k_c = 40;
    }
    cfg.numerics.balance_rows = trial % 5 != 0;
    cfg.output.csv = "out" + std::to_string(trial) + ".csv";
    if (trial % 2) cfg.output.touchstone = "out.s2p";
    cfg.output.params = trial % 2 ? std::vector<std::string>{"S21"} : known_params;
    REQUIRE(cfg.problems().empty());
    const std::string text = serialize(cfg);
    CHECK(parse_config(text) == cfg);
    CHECK(serialize(parse_config(text)) == text);
  }
}

TEST_CASE("missing files") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), InvalidInput);
}
