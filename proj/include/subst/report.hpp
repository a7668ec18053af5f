#pragma once

// Aggregated analysis report and the pipeline that fills it: rule metadata,
// primitivity, graph classification, the seed's dictionary orbit, fixed-point
// defect summaries, and references to any spectrum files produced. Reports
// serialize deterministically (ordered keys, fixed field order), so identical
// inputs yield identical bytes.

#include <fstream>
#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subst/dictionary.hpp"
#include "subst/fixed_point.hpp"
#include "subst/rule.hpp"
#include "subst/seed.hpp"
#include "subst/spectra.hpp"
#include "subst/tpatch_graph.hpp"

namespace subst {

using Json = nlohmann::ordered_json;

struct StageFailure {
  std::string stage;
  std::string error;
  friend bool operator==(const StageFailure&, const StageFailure&) = default;
};

struct FixedPointSummary {
  std::string anchor;
  int period = 1;
  int radius = 0;
  std::string geometry;
  std::vector<std::pair<int, int>> illegalAnchors;
  bool fillIndependent = false;
  bool selfSimilar = false;
  bool onCycle = true;  // false when the defect patch is not Psi-periodic
  friend bool operator==(const FixedPointSummary&, const FixedPointSummary&) = default;
};

struct AnalysisReport {
  int schemaVersion = 1;
  std::string ruleName;
  std::vector<std::string> alphabet;
  int blockWidth = 0;
  int blockHeight = 0;

  std::optional<int> primitivityExponent;

  std::vector<std::string> legalPatches;
  int legalStabilizedAt = 0;

  bool tBijective = false;
  std::vector<bool> componentwise;
  std::optional<int> pureIllegalM0;
  long long lcmL = 1;
  long long limitPointBound = 1;
  bool limitPointBoundSharp = false;
  std::string limitPointBoundBasis;

  std::string seed;
  int preperiod = 0;
  int period = 1;
  std::vector<std::vector<std::string>> qsets;
  std::vector<std::vector<std::string>> defects;  // per j: Q_j \ legal

  std::string verdict;
  std::vector<std::string> verdictDefects;
  std::string verdictReason;

  std::vector<FixedPointSummary> fixedPoints;
  std::vector<std::string> spectraFiles;
  std::vector<StageFailure> stagesFailed;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

inline Json toJson(const AnalysisReport& r) {
  Json j;
  j["schema_version"] = r.schemaVersion;
  j["rule"] = Json{{"name", r.ruleName},
                   {"alphabet", r.alphabet},
                   {"block", Json::array({r.blockWidth, r.blockHeight})}};
  j["primitivity"] = Json{{"certified", r.primitivityExponent.has_value()},
                          {"exponent", r.primitivityExponent ? Json(*r.primitivityExponent)
                                                             : Json(nullptr)}};
  j["legal"] = Json{{"count", r.legalPatches.size()},
                    {"patches", r.legalPatches},
                    {"stabilized_at", r.legalStabilizedAt}};
  j["classification"] =
      Json{{"t_bijective", r.tBijective},
           {"componentwise", r.componentwise},
           {"purely_t_illegal", Json{{"m0", r.pureIllegalM0 ? Json(*r.pureIllegalM0)
                                                            : Json(nullptr)}}},
           {"lcm_L", r.lcmL},
           {"limit_point_bound", Json{{"value", r.limitPointBound},
                                      {"sharp", r.limitPointBoundSharp},
                                      {"basis", r.limitPointBoundBasis}}}};
  j["dictionary"] = Json{{"seed", r.seed},
                         {"N0", r.preperiod},
                         {"l0", r.period},
                         {"qsets", r.qsets},
                         {"defects", r.defects}};
  j["verdict"] = Json{{"kind", r.verdict},
                      {"defects", r.verdictDefects},
                      {"reason", r.verdictReason}};
  Json fixed = Json::array();
  for (const auto& fp : r.fixedPoints) {
    Json anchors = Json::array();
    for (const auto& [x, y] : fp.illegalAnchors) anchors.push_back(Json::array({x, y}));
    fixed.push_back(Json{{"anchor", fp.anchor},
                         {"on_cycle", fp.onCycle},
                         {"period", fp.period},
                         {"radius", fp.radius},
                         {"geometry", fp.geometry},
                         {"illegal_anchors", anchors},
                         {"fill_independent", fp.fillIndependent},
                         {"self_similar", fp.selfSimilar}});
  }
  j["fixed_points"] = fixed;
  j["spectra_files"] = r.spectraFiles;
  Json failures = Json::array();
  for (const auto& f : r.stagesFailed)
    failures.push_back(Json{{"stage", f.stage}, {"error", f.error}});
  j["stages_failed"] = failures;
  return j;
}

inline AnalysisReport reportFromJson(const Json& j) {
  AnalysisReport r;
  r.schemaVersion = j.at("schema_version").get<int>();
  r.ruleName = j.at("rule").at("name").get<std::string>();
  r.alphabet = j.at("rule").at("alphabet").get<std::vector<std::string>>();
  r.blockWidth = j.at("rule").at("block").at(0).get<int>();
  r.blockHeight = j.at("rule").at("block").at(1).get<int>();
  if (!j.at("primitivity").at("exponent").is_null())
    r.primitivityExponent = j.at("primitivity").at("exponent").get<int>();
  r.legalPatches = j.at("legal").at("patches").get<std::vector<std::string>>();
  r.legalStabilizedAt = j.at("legal").at("stabilized_at").get<int>();
  const Json& c = j.at("classification");
  r.tBijective = c.at("t_bijective").get<bool>();
  r.componentwise = c.at("componentwise").get<std::vector<bool>>();
  if (!c.at("purely_t_illegal").at("m0").is_null())
    r.pureIllegalM0 = c.at("purely_t_illegal").at("m0").get<int>();
  r.lcmL = c.at("lcm_L").get<long long>();
  r.limitPointBound = c.at("limit_point_bound").at("value").get<long long>();
  r.limitPointBoundSharp = c.at("limit_point_bound").at("sharp").get<bool>();
  r.limitPointBoundBasis = c.at("limit_point_bound").at("basis").get<std::string>();
  const Json& d = j.at("dictionary");
  r.seed = d.at("seed").get<std::string>();
  r.preperiod = d.at("N0").get<int>();
  r.period = d.at("l0").get<int>();
  r.qsets = d.at("qsets").get<std::vector<std::vector<std::string>>>();
  r.defects = d.at("defects").get<std::vector<std::vector<std::string>>>();
  r.verdict = j.at("verdict").at("kind").get<std::string>();
  r.verdictDefects = j.at("verdict").at("defects").get<std::vector<std::string>>();
  r.verdictReason = j.at("verdict").at("reason").get<std::string>();
  for (const Json& f : j.at("fixed_points")) {
    FixedPointSummary fp;
    fp.anchor = f.at("anchor").get<std::string>();
    fp.onCycle = f.at("on_cycle").get<bool>();
    fp.period = f.at("period").get<int>();
    fp.radius = f.at("radius").get<int>();
    fp.geometry = f.at("geometry").get<std::string>();
    for (const Json& a : f.at("illegal_anchors"))
      fp.illegalAnchors.emplace_back(a.at(0).get<int>(), a.at(1).get<int>());
    fp.fillIndependent = f.at("fill_independent").get<bool>();
    fp.selfSimilar = f.at("self_similar").get<bool>();
    r.fixedPoints.push_back(std::move(fp));
  }
  r.spectraFiles = j.at("spectra_files").get<std::vector<std::string>>();
  for (const Json& f : j.at("stages_failed"))
    r.stagesFailed.push_back(StageFailure{f.at("stage").get<std::string>(),
                                          f.at("error").get<std::string>()});
  return r;
}

struct PipelineOptions {
  int fixedPointRadius = 8;
  int dictionaryMaxIters = 64;
  int legalMaxIters = 16;
  // when set and the seed is periodic, band spectra of S^n(seed) are written
  // here for n = 0..spectrumIters and referenced in the report
  std::string spectrumOutPrefix;
  int spectrumIters = 2;
  int spectrumGrid = 32;
  long long maxBlochDim = 4096;
};

// Runs rule analysis end to end. Stage errors are recorded with their stage
// tag and downstream stages that can still run do; the report is emitted
// either way.
inline AnalysisReport runPipeline(const SubstitutionRule& rule, const SeedConfig& seed,
                                  const PipelineOptions& options = {}) {
  AnalysisReport r;
  r.ruleName = rule.name();
  for (int a = 0; a < rule.alphabet().size(); ++a)
    r.alphabet.push_back(rule.alphabet().name((LetterIndex)a));
  r.blockWidth = rule.blockWidth();
  r.blockHeight = rule.blockHeight();
  r.seed = seed.describe(rule.alphabet());

  std::optional<TSpace> space;
  try {
    space.emplace(rule, TestingDomain::defaultFor(rule));
  } catch (const Error& e) {
    r.stagesFailed.push_back({"testing-domain", e.what()});
    return r;
  }

  r.primitivityExponent = rule.primitivityExponent();

  std::optional<LegalSetResult> legal;
  try {
    legal = legalTPatches(rule, *space, options.legalMaxIters);
    r.legalPatches = legal->set.literals(*space, rule.alphabet());
    r.legalStabilizedAt = legal->stabilizedAt;
  } catch (const Error& e) {
    r.stagesFailed.push_back({"legal-set", e.what()});
  }

  std::optional<TPatchGraph> graph;
  try {
    graph = buildTPatchGraph(rule, *space);
    r.lcmL = graph->lcmL;
    r.tBijective = isTBijective(rule, *space).bijective;
    if (r.tBijective != graph->totallyCyclic)
      throw NumericError("bijectivity and cycle analysis disagree");
    r.componentwise = componentwiseBijectivity(rule);
  } catch (const Error& e) {
    r.stagesFailed.push_back({"graph", e.what()});
  }

  std::optional<PureTIllegalReport> pure;
  if (legal) {
    try {
      pure = isPurelyTIllegal(rule, *space, legal->set);
      r.pureIllegalM0 = pure->m0;
    } catch (const Error& e) {
      r.stagesFailed.push_back({"purely-t-illegal", e.what()});
    }
  }

  if (graph && pure) {
    try {
      LimitPointBound bound =
          limitPointBound(rule, *space, *graph, *pure, r.primitivityExponent.has_value());
      r.limitPointBound = bound.value;
      r.limitPointBoundSharp = bound.sharp;
      r.limitPointBoundBasis = bound.basis;
    } catch (const Error& e) {
      r.stagesFailed.push_back({"limit-point-bound", e.what()});
    }
  }

  std::optional<DictionaryOrbit> orbit;
  try {
    orbit = dictionaryOrbit(rule, *space, seed, options.dictionaryMaxIters);
    r.preperiod = orbit->preperiod;
    r.period = orbit->period;
    for (const auto& qj : orbit->qsets) {
      r.qsets.push_back(qj.literals(*space, rule.alphabet()));
      if (legal)
        r.defects.push_back(qj.minus(legal->set).literals(*space, rule.alphabet()));
    }
  } catch (const Error& e) {
    r.stagesFailed.push_back({"dictionary-orbit", e.what()});
  }

  if (legal) {
    try {
      ConvergenceReport verdict = convergenceVerdict(rule, *space, seed, legal->set,
                                                     r.tBijective, options.dictionaryMaxIters);
      r.verdict = verdictName(verdict.verdict);
      r.verdictReason = verdict.reason;
      for (TPatchCode c : verdict.defects)
        r.verdictDefects.push_back(space->literal(rule.alphabet(), c));
    } catch (const Error& e) {
      r.stagesFailed.push_back({"convergence-verdict", e.what()});
    }
  }

  if (legal && orbit) {
    // fixed-point summary for each distinct defect patch across the Q_j
    PatchSet defectPatches;
    for (const auto& qj : orbit->qsets) defectPatches.unionWith(qj.minus(legal->set));
    for (TPatchCode c : defectPatches.codes()) {
      FixedPointSummary fp;
      fp.anchor = space->literal(rule.alphabet(), c);
      fp.radius = options.fixedPointRadius;
      try {
        FixedPointWindow w =
            fixedPointWindow(rule, *space, space->decode(c), options.fixedPointRadius);
        DefectMap defects = classifyDefects(w, *space, legal->set);
        fp.period = w.period;
        fp.geometry = geometryName(defects.geometry);
        for (Vec2 a : defects.illegalAnchors) fp.illegalAnchors.emplace_back(a.x, a.y);
        fp.fillIndependent = w.fillIndependent;
        fp.selfSimilar = w.certifiedSelfSimilar;
      } catch (const NotOnCycleError&) {
        fp.onCycle = false;
        fp.geometry = "not-on-cycle";
      } catch (const Error& e) {
        r.stagesFailed.push_back({"fixed-point " + fp.anchor, e.what()});
        continue;
      }
      r.fixedPoints.push_back(std::move(fp));
    }
  }

  if (!options.spectrumOutPrefix.empty()) {
    try {
      auto periodic = seed.asPeriodic();
      if (!periodic)
        throw ValidationError("spectra require a constant or periodic seed");
      std::vector<double> values((size_t)rule.alphabet().size());
      for (size_t a = 0; a < values.size(); ++a) values[a] = 9.0 * (double)a;
      Potential pot = Potential::singleLetter(values);
      PeriodicConfig cfg = *periodic;
      for (int n = 0; n <= options.spectrumIters; ++n) {
        if (n > 0) cfg = substitutePeriodic(rule, cfg);
        if (cfg.sites() > options.maxBlochDim)
          throw BudgetError("Bloch dimension exceeds the cap at n=" + std::to_string(n));
        SpectrumResult s = spectrumPeriodic(cfg, pot, &*space, options.spectrumGrid);
        std::string path = options.spectrumOutPrefix + "-n" + std::to_string(n) + ".csv";
        std::ofstream out(path);
        if (!out) throw ValidationError("cannot write '" + path + "'");
        out << bandsCsv(s.spectrum);
        r.spectraFiles.push_back(path);
      }
    } catch (const Error& e) {
      r.stagesFailed.push_back({"spectra", e.what()});
    }
  }
  return r;
}

}  // namespace subst
