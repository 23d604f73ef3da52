#include <doctest.h>

#include "causal/runner.hpp"
#include "oracles.hpp"

using namespace causal;

namespace {

Json strip_time(Json j) {
  j.erase("wall_time_s");
  return j;
}

std::optional<ErrorKind> parse_error(const char* text) {
  return oracle::thrown([&] { parse_config(Json::parse(text)); });
}

}  // namespace

TEST_SUITE("runner") {
  TEST_CASE("config validation") {
    CHECK(parse_error(R"({"suite": "nope"})") == ErrorKind::ConfigError);
    CHECK(parse_error(R"({"colour": 1})") == ErrorKind::ConfigError);
    CHECK(parse_error(R"({"field": {"name": "nope"}})") == ErrorKind::ConfigError);
    CHECK(parse_error(R"({"morphism": {"name": "nope"}})") == ErrorKind::ConfigError);
    CHECK(parse_error(R"({"region": {"samples": 0}})") == ErrorKind::ConfigError);
    CHECK(parse_error(R"({"region": {"radius": -1}})") == ErrorKind::ConfigError);
    CHECK(parse_error(R"({"tolerances": {"asd": 0}})") == ErrorKind::ConfigError);
    CHECK(parse_error(R"({"tolerances": {"made_up": 1}})") == ErrorKind::ConfigError);
    CHECK(parse_error(R"({"N": 2})") == ErrorKind::ConfigError);
    CHECK(parse_error(R"({"seed": 1.5})") == ErrorKind::ConfigError);
    CHECK(parse_error(R"({"suite": "super", "morphism": {"name": "componentwise_square"}})") ==
          ErrorKind::ConfigError);
    CHECK_FALSE(parse_error(R"({"suite": "asdym", "field": {"name": "instanton", "rho": 1.5}})"));
  }

  TEST_CASE("config echo round-trips") {
    const RunConfig c = parse_config(Json::parse(
        R"({"suite": "pullback", "seed": 7, "region": {"radius": 0.3, "samples": 5}})"));
    const Json echo = config_to_json(c);
    CHECK(config_to_json(parse_config(echo)) == echo);
    CHECK(echo["seed"] == 7);
    CHECK(echo["region"]["samples"] == 5);
  }

  TEST_CASE("zero field passes with zero residuals") {
    const Report r = run(parse_config(Json::parse(R"({"suite": "asdym", "field": {"name": "zero"}})")));
    CHECK(r.pass);
    for (const auto& rec : r.records)
      if (!rec.detect) CHECK(rec.max_residual == 0.0);
  }

  TEST_CASE("pullback acceptance and its control") {
    const Report ok = run(parse_config(Json::parse(
        R"({"suite": "pullback", "field": {"name": "instanton"}, "morphism": {"name": "lifted_affine"}, "seed": 42})")));
    CHECK(ok.pass);
    for (const auto& rec : ok.records)
      if (rec.name == "pullback.asd_preservation") CHECK(rec.max_residual < 1e-5);

    const Report bad = run(parse_config(Json::parse(
        R"({"suite": "pullback", "field": {"name": "perturbed_instanton"}, "region": {"samples": 10}})")));
    CHECK_FALSE(bad.pass);
  }

  TEST_CASE("reports are deterministic and thread-independent") {
    RunConfig c = parse_config(Json::parse(R"({"suite": "contact", "seed": 3})"));
    const Json a = strip_time(report_to_json(run(c)));
    c.threads = 4;
    const Json b = strip_time(report_to_json(run(c)));
    CHECK(a.dump() == b.dump());
    CHECK(a["schema_version"] == kReportSchema);
    CHECK(a["toolkit_version"] == kToolkitVersion);
    for (const auto& rec : a["records"]) {
      CHECK(rec.contains("check"));
      CHECK(rec.contains("anchor"));
      CHECK(rec.contains("errors"));
    }
  }

  TEST_CASE("overall pass requires every record") {
    const Report r = run(parse_config(Json::parse(R"({"suite": "super", "connection": {"name": "random"}})")));
    CHECK_FALSE(r.pass);
    int failing = 0;
    for (const auto& rec : r.records) failing += rec.pass ? 0 : 1;
    CHECK(failing > 0);
  }
}
