#include <doctest.h>

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "ripkit/manifest.hpp"
#include "ripkit/serialize.hpp"

using namespace ripkit;

TEST_CASE("every report embeds the schema version and a kind tag") {
  IncoherenceReport inc;
  ExpansionReport exp;
  PropertyReport prop;
  DimensionBound dim;
  for (const auto& text : {report_json(inc), report_json(exp),
                           report_json(prop), report_json(dim)}) {
    const auto j = nlohmann::json::parse(text);
    CHECK(j.contains("version"));
    CHECK(j["version"] == 1);
    CHECK(j.contains("kind"));
  }
}

TEST_CASE("infinite bounds serialize as null markers") {
  RipEstimate est;
  est.hi_max = std::numeric_limits<double>::infinity();
  const auto j = nlohmann::json::parse(report_json(est));
  CHECK(j["hi_max"].is_null());
}

TEST_CASE("vectors round trip through json files") {
  const std::vector<double> v{1.5, -2.25, 0.0, 1e-9};
  const std::string path = "vec_roundtrip_test.json";
  {
    std::ofstream os(path);
    os << vector_to_json(v);
  }
  CHECK(vector_from_json_file(path) == v);
  std::remove(path.c_str());
}

TEST_CASE("manifest digests are content digests") {
  CHECK(digest_hex("abc") == digest_hex("abc"));
  CHECK(digest_hex("abc") != digest_hex("abd"));
  RunManifest man;
  man.command = "plan";
  man.args = {{"n", "64"}};
  man.seed = 7;
  const auto j = nlohmann::json::parse(man.to_json());
  CHECK(j["kind"] == "run_manifest");
  CHECK(j["command"] == "plan");
  CHECK(j["seed"] == 7);
}
