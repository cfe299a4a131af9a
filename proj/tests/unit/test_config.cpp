#include <doctest.h>

#include "support.hpp"
#include "synapse/config.hpp"
#include "synapse/error.hpp"

using namespace synapse;

namespace {

std::string scene(const char* name) { return std::string(SYNAPSE_SCENE_DIR) + "/" + name; }

ConfigError config_error(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a config error");
  return ConfigError("", 0, "");
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("bundled default scene") {
    const SceneConfig c = parse_config(default_scene_text());
    CHECK(c.species.gF == 0.5);
    CHECK(c.species.mTilde == 2.0);
    CHECK(c.drive.frequency() == 0.8e6);
    REQUIRE(c.wires.size() == 2);
    for (const Wire& w : c.wires) {
      CHECK(w.idc == 0.0925);
      CHECK(w.irf == 0.05);
    }
    CHECK(c.bias == Vec3(-3e-5, -3e-5, 0));
    CHECK(c.assembly() == crossed_wires());
    CHECK(c.analysis.bracket_lo == 0.04);
    CHECK(c.analysis.mode == BarrierMode::Full);
    CHECK(load_config(scene("crossed.yaml")) == c);
  }

  TEST_CASE("round trip through canonical YAML") {
    for (const char* name : {"crossed.yaml", "single_wire.yaml", "parallel_wires.yaml"}) {
      const SceneConfig c = load_config(scene(name));
      const std::string text = to_yaml(c);
      CHECK(parse_config(text) == c);
      CHECK(to_yaml(parse_config(text)) == text);
    }
    SceneConfig c = parse_config(default_scene_text());
    c.wires[1].idc = 0.1 + 0.2;  // not representable in short decimal
    c.analysis.touch_tolerance = 1.0 / 3.0 * 1e-30;
    c.analysis.grid = GridSpec{Vec3(-1e-4, -1e-4, -5e-4), Vec3(2e-4, 2e-4, 6e-4), Eigen::Vector3i(8, 9, 10)};
    c.schedule = BiasSchedule({{0.0, c.bias}, {1e-3, Vec3(1e-6, 0, 0)}});
    c.seed = 0xFFFFFFFFFFFFFFFFull;
    CHECK(parse_config(to_yaml(c)) == c);
  }

  TEST_CASE("doubles print in shortest round-trip form") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(0.0925) == "0.0925");
    for (int i = 0; i < 1000; ++i) {
      const double v = test::uniform(-1, 1) * std::pow(10.0, test::uniform(-40, 40));
      CHECK(std::stod(format_double(v)) == v);
    }
  }

  TEST_CASE("errors name the key and line") {
    const std::string base(default_scene_text());
    CHECK(config_error("").key() == "species");

    const ConfigError neg = config_error(replace(base, "frequency: 0.8e6", "frequency: -1"));
    CHECK(neg.key() == "drive.frequency");
    CHECK(neg.line() > 0);

    const std::string typo = replace(base, "  gF: 0.5\n", "  gF: 0.5\n  colour: red\n");
    const ConfigError unk = config_error(typo);
    CHECK(unk.key() == "species.colour");
    std::size_t line = 1;
    for (std::size_t i = 0; i < typo.find("colour"); ++i) line += typo[i] == '\n';
    CHECK(unk.line() == static_cast<int>(line));

    CHECK(config_error(replace(base, "gF: 0.5", "gF: fast")).key() == "species.gF");
    CHECK(config_error(replace(base, "  mass: 1.44316e-25\n", "")).key() == "species.mass");
    CHECK(config_error(replace(base, "type: line", "type: helix")).key() == "wires[0].type");
    CHECK(config_error(replace(base, "mTilde: 2", "mTilde: 5")).key() == "species");
    CHECK(config_error(replace(base, "bracket: [0.04, 0.2]", "bracket: [0.2, 0.04]")).key() == "analysis.bracket");
    CHECK(config_error("species: [unclosed").code() == ErrorCode::Config);
  }

  TEST_CASE("bias schedules") {
    const std::string base(default_scene_text());
    const std::string sched = replace(base, "bias: [-3e-5, -3e-5, 0]",
                                      "biasSchedule:\n  - {t: 0, bias: [-3e-5, -3e-5, 0]}\n  - {t: 0.001, bias: [0, -3e-5, 0]}");
    const SceneConfig c = parse_config(sched);
    REQUIRE(c.schedule);
    CHECK(c.bias == Vec3(-3e-5, -3e-5, 0));
    CHECK(c.bias_schedule().at(0.0005) == Vec3(-1.5e-5, -3e-5, 0));

    const std::string both = replace(base, "bias: [-3e-5, -3e-5, 0]",
                                     "bias: [0, 0, 0]\nbiasSchedule:\n  - {t: 0, bias: [0, 0, 0]}");
    CHECK(config_error(both).key() == "biasSchedule");
    const std::string backwards = replace(base, "bias: [-3e-5, -3e-5, 0]",
                                          "biasSchedule:\n  - {t: 1, bias: [0, 0, 0]}\n  - {t: 0, bias: [0, 0, 0]}");
    CHECK(config_error(backwards).key() == "biasSchedule");
  }

  TEST_CASE("missing files are IO errors") {
    try {
      load_config("/nonexistent/scene.yaml");
      FAIL("expected an IO error");
    } catch (const ConfigError&) {
      FAIL("missing file is not a config error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Io);
    }
  }
}
