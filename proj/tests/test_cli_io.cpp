// File parsing, the analysis pipeline, and report serialization.

#include "catch_amalgamated.hpp"

#include <json.hpp>

#include "subst/report.hpp"
#include "subst/rule.hpp"
#include "subst/seed.hpp"

#include "test_util.hpp"

using namespace subst;
using testutil::loadRule;

namespace {

// Structural validation against the shipped schema: supports the subset of
// JSON Schema the report schema uses (type, properties, required, items,
// enum on scalars).
bool validates(const Json& schema, const Json& value, std::string& where) {
  if (schema.contains("type")) {
    const Json& t = schema["type"];
    auto matches = [&](const std::string& name) {
      if (name == "object") return value.is_object();
      if (name == "array") return value.is_array();
      if (name == "string") return value.is_string();
      if (name == "integer") return value.is_number_integer();
      if (name == "number") return value.is_number();
      if (name == "boolean") return value.is_boolean();
      if (name == "null") return value.is_null();
      return false;
    };
    bool ok = false;
    if (t.is_string()) ok = matches(t.get<std::string>());
    else
      for (const Json& alt : t) ok |= matches(alt.get<std::string>());
    if (!ok) {
      where += " [type mismatch]";
      return false;
    }
  }
  if (schema.contains("enum") && !value.is_null()) {
    bool ok = false;
    for (const Json& e : schema["enum"]) ok |= (e == value);
    if (!ok) {
      where += " [enum mismatch]";
      return false;
    }
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const Json& key : schema["required"])
        if (!value.contains(key.get<std::string>())) {
          where += " [missing " + key.get<std::string>() + "]";
          return false;
        }
    if (schema.contains("properties"))
      for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
        if (value.contains(it.key())) {
          std::string sub = where + "." + it.key();
          if (!validates(it.value(), value[it.key()], sub)) {
            where = sub;
            return false;
          }
        }
  }
  if (value.is_array() && schema.contains("items")) {
    for (size_t i = 0; i < value.size(); ++i) {
      std::string sub = where + "[" + std::to_string(i) + "]";
      if (!validates(schema["items"], value[(Json::size_type)i], sub)) {
        where = sub;
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("shipped fixtures parse to the expected shapes") {
  auto table = loadRule("table");
  CHECK(table.alphabet().size() == 4);
  CHECK(table.blockWidth() == 2);
  auto ex = loadRule("example45");
  CHECK(ex.alphabet().size() == 3);
  CHECK(ex.blockWidth() == 3);
  CHECK(ex.blockHeight() == 3);
}

TEST_CASE("rule parsing rejects malformed input with line diagnostics") {
  const std::string base = "name t\nalphabet a b\nblock 2 2\n";
  // ragged grid row
  try {
    parseRuleFile(base + "rule a\na b\na\nrule b\nb b\nb b\n");
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    CHECK(std::string(e.what()).find("line 6") != std::string::npos);
  }
  CHECK_THROWS_AS(parseRuleFile(base + "rule a\na z\na a\nrule b\nb b\nb b\n"),
                  ValidationError);  // unknown letter
  CHECK_THROWS_AS(parseRuleFile("name t\nalphabet a b\nblock 0 2\n"), ValidationError);
  CHECK_THROWS_AS(parseRuleFile(base + "bogus x\n"), ValidationError);  // unknown directive
  CHECK_THROWS_AS(parseRuleFile(base + "rule a\na a\na a\nrule a\na a\na a\n"),
                  ValidationError);  // duplicate
  CHECK_THROWS_AS(parseRuleFile(base + "rule a\na a\na a\n"), ValidationError);  // missing b
  CHECK_THROWS_AS(parseRuleFile(base), ValidationError);
}

TEST_CASE("seed specs parse on the CLI grammar") {
  auto table = loadRule("table");
  SeedConfig c = parseSeedSpec(table.alphabet(), "const:g");
  CHECK(c.isConstant());
  CHECK(c.letterAt({5, -7}) == table.alphabet().index("g"));

  SeedConfig p = parseSeedSpec(table.alphabet(),
                               "periodic:" + std::string(FIXTURES_DIR) + "/rb.cell");
  REQUIRE(p.isPeriodic());
  CHECK(p.periodicConfig().p1 == 2);

  SeedConfig f = parseSeedSpec(table.alphabet(), "patch:ry/gb:fill=y");
  REQUIRE(f.isPatchFill());
  // literal rows anchor with the top-right cell at the origin
  CHECK(f.letterAt({0, 0}) == table.alphabet().index("y"));
  CHECK(f.letterAt({-1, 0}) == table.alphabet().index("r"));
  CHECK(f.letterAt({0, -1}) == table.alphabet().index("b"));
  CHECK(f.letterAt({9, 9}) == table.alphabet().index("y"));

  CHECK_THROWS_AS(parseSeedSpec(table.alphabet(), "const:q"), ValidationError);
  CHECK_THROWS_AS(parseSeedSpec(table.alphabet(), "weird:x"), ValidationError);
  CHECK_THROWS_AS(parseSeedSpec(table.alphabet(), "periodic:/nonexistent"), ValidationError);
}

TEST_CASE("seed files validate dimensions") {
  auto table = loadRule("table");
  CHECK_THROWS_AS(parseSeedFile(table.alphabet(), "period 2 2\ncell\nr b\nr\n"),
                  ValidationError);
  CHECK_THROWS_AS(parseSeedFile(table.alphabet(), "cell\nr\n"), ValidationError);
  CHECK_THROWS_AS(parseSeedFile(table.alphabet(), "period 2 2\n"), ValidationError);
}

TEST_CASE("pipeline report for table constant-r") {
  auto table = loadRule("table");
  AnalysisReport r = runPipeline(table, SeedConfig::constant(table.alphabet().index("r")));
  CHECK(r.stagesFailed.empty());
  CHECK(r.primitivityExponent == 2);
  CHECK(r.legalPatches.size() == 24);
  CHECK(r.tBijective);
  CHECK_FALSE(r.pureIllegalM0.has_value());
  CHECK(r.lcmL == 2);
  CHECK(r.period == 2);
  CHECK(r.verdict == "diverges-with-defects");
  REQUIRE(r.qsets.size() == 2);
  REQUIRE(r.defects.size() == 2);
  CHECK(r.defects[0].size() == 4);
  CHECK(r.defects[1].size() == 4);
  REQUIRE_FALSE(r.fixedPoints.empty());
  for (const auto& fp : r.fixedPoints) {
    CHECK(fp.onCycle);
    CHECK(fp.geometry == "pure-line-e2");
    CHECK(fp.fillIndependent);
    CHECK(fp.selfSimilar);
  }
}

TEST_CASE("pipeline report for chair constant-r") {
  auto chair = loadRule("chair");
  AnalysisReport r = runPipeline(chair, SeedConfig::constant(chair.alphabet().index("r")));
  CHECK(r.stagesFailed.empty());
  CHECK(r.legalPatches.size() == 19);
  CHECK_FALSE(r.tBijective);
  CHECK(r.pureIllegalM0 == 2);
  CHECK(r.lcmL == 1);
  CHECK(r.period == 1);
  CHECK(r.limitPointBound == 1);
  CHECK(r.limitPointBoundSharp);
  REQUIRE(r.fixedPoints.size() == 1);
  CHECK(r.fixedPoints[0].anchor == "gr/ry");
  CHECK(r.fixedPoints[0].geometry == "central");
}

TEST_CASE("pipeline report for the convergent rb seed") {
  auto table = loadRule("table");
  SeedConfig seed = parseSeedSpec(table.alphabet(),
                                  "periodic:" + std::string(FIXTURES_DIR) + "/rb.cell");
  AnalysisReport r = runPipeline(table, seed);
  CHECK(r.verdict == "converges");
  CHECK(r.verdictDefects.empty());
  for (const auto& d : r.defects) CHECK(d.empty());
  CHECK(r.fixedPoints.empty());
}

TEST_CASE("reports serialize deterministically and round-trip") {
  auto table = loadRule("table");
  AnalysisReport a = runPipeline(table, SeedConfig::constant(table.alphabet().index("r")));
  AnalysisReport b = runPipeline(table, SeedConfig::constant(table.alphabet().index("r")));
  CHECK(toJson(a).dump(2) == toJson(b).dump(2));
  AnalysisReport back = reportFromJson(toJson(a));
  CHECK(back == a);
  CHECK(toJson(back).dump(2) == toJson(a).dump(2));
}

TEST_CASE("every illegal patch listed appears in some defect set") {
  auto table = loadRule("table");
  AnalysisReport r = runPipeline(table, SeedConfig::constant(table.alphabet().index("r")));
  std::set<std::string> listed;
  for (const auto& d : r.defects) listed.insert(d.begin(), d.end());
  for (const auto& p : r.verdictDefects) CHECK(listed.count(p) == 1);
  for (const auto& fp : r.fixedPoints) CHECK(listed.count(fp.anchor) == 1);
}

TEST_CASE("reports validate against the shipped schema") {
  Json schema = Json::parse(
      testutil::readFile(std::string(FIXTURES_DIR) + "/../schema/report-v1.schema.json"));
  for (const char* stem : {"table", "chair"}) {
    auto rule = loadRule(stem);
    AnalysisReport r = runPipeline(rule, SeedConfig::constant(0));
    std::string where = "report(" + std::string(stem) + ")";
    CHECK(validates(schema, toJson(r), where));
    INFO(where);
  }
}

TEST_CASE("pipeline surfaces stage failures with their tag") {
  SubstitutionRule flat("flat", Alphabet({"a", "b"}), 2, 1, {{0, 1}, {1, 0}});
  AnalysisReport r = runPipeline(flat, SeedConfig::constant(0));
  REQUIRE_FALSE(r.stagesFailed.empty());
  CHECK(r.stagesFailed[0].stage == "testing-domain");
}
