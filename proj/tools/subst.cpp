// Command-line surface for the substitution-spectra toolkit.
//
// Subcommands: show, legal, dict, classify, graph, fixpoint, spectrum,
// spectrum-box, compare, report. Exit codes: 0 success, 2 validation,
// 3 numeric, 4 uncertified/budget.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "subst/dictionary.hpp"
#include "subst/fixed_point.hpp"
#include "subst/interval_union.hpp"
#include "subst/report.hpp"
#include "subst/rule.hpp"
#include "subst/seed.hpp"
#include "subst/spectra.hpp"
#include "subst/tpatch_graph.hpp"
#include "subst/window.hpp"

using namespace subst;

namespace {

std::string readFileOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void writeFileOrThrow(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
}

SubstitutionRule loadRule(const std::string& path) {
  return parseRuleFile(readFileOrThrow(path));
}

// Potential spec grammar: "single:r=0,y=9,b=18,g=27" assigns per-letter
// values (unassigned letters default to 0); "indicator:lambda=10[,scale=2]"
// weights sites whose anchored T-patch is illegal.
Potential parsePotentialSpec(const SubstitutionRule& rule, const PatchSet& legal,
                             const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw ValidationError("potential spec must be single:... or indicator:...");
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream in(rest);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ValidationError("potential entry '" + item + "' is not key=value");
    pairs.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  if (kind == "single") {
    std::vector<double> values((size_t)rule.alphabet().size(), 0.0);
    for (const auto& [key, value] : pairs) {
      LetterIndex a = rule.alphabet().index(key);
      try {
        values[a] = std::stod(value);
      } catch (const std::exception&) {
        throw ValidationError("bad potential value '" + value + "'");
      }
    }
    return Potential::singleLetter(values);
  }
  if (kind == "indicator") {
    double lambda0 = 0;
    int scale = 1;
    for (const auto& [key, value] : pairs) {
      try {
        if (key == "lambda") lambda0 = std::stod(value);
        else if (key == "scale") scale = std::stoi(value);
        else throw ValidationError("unknown indicator option '" + key + "'");
      } catch (const ValidationError&) {
        throw;
      } catch (const std::exception&) {
        throw ValidationError("bad indicator value '" + value + "'");
      }
    }
    return Potential::illegalIndicator(lambda0, legal, scale);
  }
  throw ValidationError("unknown potential kind '" + kind + "'");
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

int runShow(const std::string& rulePath, bool json) {
  SubstitutionRule rule = loadRule(rulePath);
  if (json) {
    Json j;
    j["name"] = rule.name();
    Json letters = Json::array();
    for (int a = 0; a < rule.alphabet().size(); ++a)
      letters.push_back(rule.alphabet().name((LetterIndex)a));
    j["alphabet"] = letters;
    j["block"] = Json::array({rule.blockWidth(), rule.blockHeight()});
    Json rules;
    for (int a = 0; a < rule.alphabet().size(); ++a) {
      Json rows = Json::array();
      for (int row = 0; row < rule.blockHeight(); ++row) {
        std::string line;
        for (int fx = 0; fx < rule.blockWidth(); ++fx) {
          if (fx) line += " ";
          line += rule.alphabet().name(
              rule.image((LetterIndex)a, {fx, rule.blockHeight() - 1 - row}));
        }
        rows.push_back(line);
      }
      rules[rule.alphabet().name((LetterIndex)a)] = rows;
    }
    j["rules"] = rules;
    emit(j);
    return 0;
  }
  std::cout << "rule " << rule.name() << ": " << rule.alphabet().size() << " letters, block "
            << rule.blockWidth() << "x" << rule.blockHeight() << "\n";
  for (int a = 0; a < rule.alphabet().size(); ++a) {
    std::cout << rule.alphabet().name((LetterIndex)a) << " ->\n";
    for (int row = 0; row < rule.blockHeight(); ++row) {
      std::cout << " ";
      for (int fx = 0; fx < rule.blockWidth(); ++fx)
        std::cout << " "
                  << rule.alphabet().name(
                         rule.image((LetterIndex)a, {fx, rule.blockHeight() - 1 - row}));
      std::cout << "\n";
    }
  }
  return 0;
}

int runLegal(const std::string& rulePath, bool json) {
  SubstitutionRule rule = loadRule(rulePath);
  TSpace space(rule, TestingDomain::defaultFor(rule));
  LegalSetResult legal = legalTPatches(rule, space);
  if (json) {
    Json j;
    j["count"] = legal.set.size();
    j["patches"] = legal.set.literals(space, rule.alphabet());
    j["primitive_certified"] = legal.primitiveCertified;
    j["stabilized_at"] = legal.stabilizedAt;
    emit(j);
    return 0;
  }
  std::cout << legal.set.size() << " legal T-patches"
            << (legal.primitiveCertified ? "" : " (letters-reachable only, not primitive)")
            << ":\n";
  for (const auto& lit : legal.set.literals(space, rule.alphabet()))
    std::cout << "  " << lit << "\n";
  return 0;
}

int runDict(const std::string& rulePath, const std::string& seedSpec, int maxIters, bool json) {
  SubstitutionRule rule = loadRule(rulePath);
  TSpace space(rule, TestingDomain::defaultFor(rule));
  SeedConfig seed = parseSeedSpec(rule.alphabet(), seedSpec);
  LegalSetResult legal = legalTPatches(rule, space);
  DictionaryOrbit orbit = dictionaryOrbit(rule, space, seed, maxIters);
  Json j;
  j["N0"] = orbit.preperiod;
  j["l0"] = orbit.period;
  Json qsets = Json::array();
  Json defects = Json::array();
  for (const auto& q : orbit.qsets) {
    qsets.push_back(q.literals(space, rule.alphabet()));
    defects.push_back(q.minus(legal.set).literals(space, rule.alphabet()));
  }
  j["qsets"] = qsets;
  j["defects"] = defects;
  if (json) {
    emit(j);
  } else {
    std::cout << "N0 = " << orbit.preperiod << ", l0 = " << orbit.period << "\n";
    for (size_t i = 0; i < orbit.qsets.size(); ++i) {
      std::cout << "Q" << i << " (" << orbit.qsets[i].size() << " patches), defects:";
      for (const auto& lit : orbit.qsets[i].minus(legal.set).literals(space, rule.alphabet()))
        std::cout << " " << lit;
      std::cout << "\n";
    }
  }
  return 0;
}

int runClassify(const std::string& rulePath, bool json) {
  SubstitutionRule rule = loadRule(rulePath);
  TSpace space(rule, TestingDomain::defaultFor(rule));
  auto primitivity = rule.primitivityExponent();
  LegalSetResult legal = legalTPatches(rule, space);
  TPatchGraph graph = buildTPatchGraph(rule, space);
  BijectivityReport bij = isTBijective(rule, space);
  // bijectivity of Psi and total cyclicity of the tensor graph are two
  // routes to the same property; disagreement means a computation bug
  if (bij.bijective != graph.totallyCyclic)
    throw NumericError("bijectivity and cycle analysis disagree");
  PureTIllegalReport pure = isPurelyTIllegal(rule, space, legal.set);
  LimitPointBound bound =
      limitPointBound(rule, space, graph, pure, primitivity.has_value());
  Json j;
  j["primitive_k"] = primitivity ? Json(*primitivity) : Json(nullptr);
  j["t_bijective"] = bij.bijective;
  j["componentwise"] = componentwiseBijectivity(rule);
  Json dominoes = Json::array();
  for (const auto& cert : pure.dominoes) {
    Json d;
    d["domino"] = cert.domino.toLiteral(rule.alphabet());
    d["certified_at"] = cert.certifiedAt ? Json(*cert.certifiedAt) : Json(nullptr);
    if (!cert.persistentIllegal.empty()) {
      Json bad = Json::array();
      for (TPatchCode c : cert.persistentIllegal) bad.push_back(space.literal(rule.alphabet(), c));
      d["persistent_illegal"] = bad;
    }
    dominoes.push_back(d);
  }
  j["purely_t_illegal"] =
      Json{{"m0", pure.m0 ? Json(*pure.m0) : Json(nullptr)}, {"dominoes", dominoes}};
  j["lcm_L"] = graph.lcmL;
  j["limit_point_bound"] =
      Json{{"value", bound.value}, {"sharp", bound.sharp}, {"basis", bound.basis}};
  if (json) {
    emit(j);
  } else {
    std::cout << "primitive_k: " << (primitivity ? std::to_string(*primitivity) : "none")
              << "\n"
              << "t_bijective: " << (bij.bijective ? "true" : "false") << "\n"
              << "purely_t_illegal m0: " << (pure.m0 ? std::to_string(*pure.m0) : "none")
              << "\n"
              << "lcm_L: " << graph.lcmL << "\n"
              << "limit_point_bound: " << bound.value << (bound.sharp ? " (sharp)" : "")
              << "\n";
  }
  return 0;
}

int runGraph(const std::string& rulePath, const std::string& outPath) {
  SubstitutionRule rule = loadRule(rulePath);
  TSpace space(rule, TestingDomain::defaultFor(rule));
  TPatchGraph graph = buildTPatchGraph(rule, space);
  std::string dot = toDot(rule, graph);
  if (outPath.empty())
    std::cout << dot;
  else
    writeFileOrThrow(outPath, dot);
  return 0;
}

int runFixpoint(const std::string& rulePath, const std::string& patchLiteral, int radius,
                bool json) {
  SubstitutionRule rule = loadRule(rulePath);
  TSpace space(rule, TestingDomain::defaultFor(rule));
  LegalSetResult legal = legalTPatches(rule, space);
  Patch q = parsePatchLiteral(rule.alphabet(), patchLiteral);
  FixedPointWindow fp = fixedPointWindow(rule, space, q, radius);
  DefectMap defects = classifyDefects(fp, space, legal.set);
  Json j;
  j["anchor"] = q.toLiteral(rule.alphabet());
  j["period"] = fp.period;
  j["radius"] = radius;
  j["fill_independent"] = fp.fillIndependent;
  j["self_similar"] = fp.certifiedSelfSimilar;
  Json rows = Json::array();
  for (int y = radius; y >= -radius; --y) {
    std::string line;
    for (int x = -radius; x <= radius; ++x) {
      if (x > -radius) line += " ";
      line += rule.alphabet().name(fp.window.at({x, y}));
    }
    rows.push_back(line);
  }
  j["window"] = rows;  // row-major, top row first
  Json anchors = Json::array();
  for (Vec2 a : defects.illegalAnchors) anchors.push_back(Json::array({a.x, a.y}));
  j["illegal_anchors"] = anchors;
  j["geometry"] = geometryName(defects.geometry);
  if (json) {
    emit(j);
  } else {
    std::cout << "anchor " << j["anchor"].get<std::string>() << ", period " << fp.period
              << ", geometry " << geometryName(defects.geometry) << ", "
              << defects.illegalAnchors.size() << " illegal anchors\n";
    for (const auto& row : j["window"]) std::cout << "  " << row.get<std::string>() << "\n";
  }
  return 0;
}

std::string rawBandsCsv(const SpectrumResult& s) {
  std::string out = "band_index,lo,hi\n";
  for (size_t i = 0; i < s.bands.size(); ++i)
    out += std::to_string(i) + "," + formatDouble12(s.bands[i].first) + "," +
           formatDouble12(s.bands[i].second) + "\n";
  return out;
}

int runSpectrum(const std::string& rulePath, const std::string& seedSpec, int iters,
                const std::string& potentialSpec, int kgrid, bool refine,
                const std::string& outPath, long long maxBlochDim) {
  SubstitutionRule rule = loadRule(rulePath);
  TSpace space(rule, TestingDomain::defaultFor(rule));
  LegalSetResult legal = legalTPatches(rule, space);
  SeedConfig seed = parseSeedSpec(rule.alphabet(), seedSpec);
  auto periodic = seed.asPeriodic();
  if (!periodic)
    throw ValidationError("spectrum requires a constant or periodic seed");
  PeriodicConfig cfg = *periodic;
  for (int i = 0; i < iters; ++i) {
    cfg = substitutePeriodic(rule, cfg);
    if (cfg.sites() > maxBlochDim)
      throw BudgetError("Bloch dimension " + std::to_string(cfg.sites()) +
                        " exceeds the cap " + std::to_string(maxBlochDim) +
                        " (raise --max-bloch-dim to override)");
  }
  Potential pot = parsePotentialSpec(rule, legal.set, potentialSpec);
  SpectrumResult s = spectrumPeriodic(cfg, pot, &space, kgrid, refine);
  if (!s.converged)
    std::cerr << "warning: refinement hit the grid cap before converging\n";
  std::string csv = rawBandsCsv(s);
  if (outPath.empty())
    std::cout << csv;
  else
    writeFileOrThrow(outPath, csv);
  return 0;
}

int runSpectrumBox(const std::string& rulePath, const std::string& patchLiteral,
                   const std::string& seedSpec, int iters, const std::string& potentialSpec,
                   int radius, const std::string& outPath, long long boxBudget) {
  SubstitutionRule rule = loadRule(rulePath);
  TSpace space(rule, TestingDomain::defaultFor(rule));
  LegalSetResult legal = legalTPatches(rule, space);
  Potential pot = parsePotentialSpec(rule, legal.set, potentialSpec);

  // window provider: a fixed-point window or an iterated seed window,
  // covering the box plus the testing-domain margin
  Patch window;
  if (!patchLiteral.empty()) {
    Patch q = parsePatchLiteral(rule.alphabet(), patchLiteral);
    window = fixedPointWindow(rule, space, q, radius + 1).window;
  } else if (!seedSpec.empty()) {
    SeedConfig seed = parseSeedSpec(rule.alphabet(), seedSpec);
    window = iterateWindow(rule, seed, iters, Rect::ball(radius + 1));
  } else {
    throw ValidationError("spectrum-box requires --patch or --seed");
  }
  std::vector<double> evals = spectrumBox(windowAccessor(window), pot, &space, radius, boxBudget);
  int side = 2 * radius + 1;
  std::cerr << "box truncation " << side << "x" << side << " (dimension " << side * side
            << "), plain restriction; eigenvalues are approximations\n";
  std::string csv = "index,eigenvalue\n";
  for (size_t i = 0; i < evals.size(); ++i)
    csv += std::to_string(i) + "," + formatDouble12(evals[i]) + "\n";
  if (outPath.empty())
    std::cout << csv;
  else
    writeFileOrThrow(outPath, csv);
  return 0;
}

int runCompare(const std::string& aPath, const std::string& bPath, bool json) {
  IntervalUnion a = readBandsCsvFile(aPath);
  IntervalUnion b = readBandsCsvFile(bPath);
  double hausdorff = hausdorffDistance(a, b);
  LebesgueMeasures m = lebesgueMeasures(a, b);
  Json j;
  j["hausdorff"] = hausdorff;
  j["leb_a"] = m.measA;
  j["leb_b"] = m.measB;
  j["leb_a_minus_b"] = m.measAminusB;
  j["leb_symm_diff"] = m.measSymmDiff;
  if (json) {
    emit(j);
  } else {
    std::cout << "hausdorff " << formatDouble12(hausdorff) << ", leb_a "
              << formatDouble12(m.measA) << ", leb_b " << formatDouble12(m.measB)
              << ", leb_a_minus_b " << formatDouble12(m.measAminusB) << ", leb_symm_diff "
              << formatDouble12(m.measSymmDiff) << "\n";
  }
  return 0;
}

int runReport(const std::string& rulePath, const std::string& seedSpec, int radius,
              const std::string& spectrumOutPrefix, int spectrumIters, int kgrid) {
  SubstitutionRule rule = loadRule(rulePath);
  SeedConfig seed = parseSeedSpec(rule.alphabet(), seedSpec);
  PipelineOptions options;
  options.fixedPointRadius = radius;
  options.spectrumOutPrefix = spectrumOutPrefix;
  options.spectrumIters = spectrumIters;
  options.spectrumGrid = kgrid;
  AnalysisReport report = runPipeline(rule, seed, options);
  emit(toJson(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block substitution dynamics and spectra toolkit"};
  app.require_subcommand(1);

  std::string rulePath, seedSpec, patchLiteral, outPath, aPath, bPath, potentialSpec;
  bool json = false, refine = false;
  int maxIters = 64, radius = 8, kgrid = 64, iters = 0;
  long long maxBlochDim = 4096, boxBudget = 4096;

  auto addRule = [&](CLI::App* cmd) {
    cmd->add_option("--rule", rulePath, "substitution definition file")->required();
  };

  CLI::App* show = app.add_subcommand("show", "print a parsed rule");
  addRule(show);
  show->add_flag("--json", json);

  CLI::App* legal = app.add_subcommand("legal", "legal T-patch set");
  addRule(legal);
  legal->add_flag("--json", json);

  CLI::App* dict = app.add_subcommand("dict", "dictionary orbit of a seed");
  addRule(dict);
  dict->add_option("--seed", seedSpec, "const:<letter> | periodic:<file> | patch:<literal>")
      ->required();
  dict->add_option("--max-iters", maxIters);
  dict->add_flag("--json", json);

  CLI::App* classify = app.add_subcommand("classify", "graph classification of a rule");
  addRule(classify);
  classify->add_flag("--json", json);

  CLI::App* graph = app.add_subcommand("graph", "DOT output of the letter graphs");
  addRule(graph);
  graph->add_option("--out", outPath, "output path (stdout when omitted)");

  CLI::App* fixpoint = app.add_subcommand("fixpoint", "fixed-point window and defects");
  addRule(fixpoint);
  fixpoint->add_option("--patch", patchLiteral, "T-patch literal, e.g. \"r r / r r\"")
      ->required();
  fixpoint->add_option("--radius", radius);
  fixpoint->add_flag("--json", json);

  CLI::App* spectrum = app.add_subcommand("spectrum", "Floquet-Bloch band spectrum");
  addRule(spectrum);
  spectrum->add_option("--seed", seedSpec)->required();
  spectrum->add_option("--iters", iters, "substitution iterations applied to the seed");
  spectrum->add_option("--potential", potentialSpec,
                       "single:r=0,y=9,... | indicator:lambda=10[,scale=2]")
      ->required();
  spectrum->add_option("--kgrid", kgrid);
  spectrum->add_flag("--refine", refine, "double the grid until Hausdorff-stable");
  spectrum->add_option("--out", outPath, "bands CSV path (stdout when omitted)");
  spectrum->add_option("--max-bloch-dim", maxBlochDim);

  CLI::App* box = app.add_subcommand("spectrum-box", "dense box-truncation eigenvalues");
  addRule(box);
  box->add_option("--patch", patchLiteral, "anchor T-patch of a fixed point");
  box->add_option("--seed", seedSpec);
  box->add_option("--iters", iters);
  box->add_option("--potential", potentialSpec)->required();
  box->add_option("--radius", radius, "box half-width R (box side 2R+1)");
  box->add_option("--out", outPath, "eigenvalue CSV path (stdout when omitted)");
  box->add_option("--box-budget", boxBudget, "maximum matrix dimension");

  CLI::App* compare = app.add_subcommand("compare", "compare two band CSV files");
  compare->add_option("--a", aPath)->required();
  compare->add_option("--b", bPath)->required();
  compare->add_flag("--json", json);

  std::string spectrumOutPrefix;
  int spectrumIters = 2;
  CLI::App* report = app.add_subcommand("report", "full analysis pipeline as JSON");
  addRule(report);
  report->add_option("--seed", seedSpec)->required();
  report->add_option("--radius", radius, "fixed-point window radius");
  report->add_option("--spectrum-out", spectrumOutPrefix,
                     "prefix for band CSVs of S^n(seed); omits the spectra stage when empty");
  report->add_option("--spectrum-iters", spectrumIters);
  report->add_option("--kgrid", kgrid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (show->parsed()) return runShow(rulePath, json);
    if (legal->parsed()) return runLegal(rulePath, json);
    if (dict->parsed()) return runDict(rulePath, seedSpec, maxIters, json);
    if (classify->parsed()) return runClassify(rulePath, json);
    if (graph->parsed()) return runGraph(rulePath, outPath);
    if (fixpoint->parsed()) return runFixpoint(rulePath, patchLiteral, radius, json);
    if (spectrum->parsed())
      return runSpectrum(rulePath, seedSpec, iters, potentialSpec, kgrid, refine, outPath,
                         maxBlochDim);
    if (box->parsed())
      return runSpectrumBox(rulePath, patchLiteral, seedSpec, iters, potentialSpec, radius,
                            outPath, boxBudget);
    if (compare->parsed()) return runCompare(aPath, bPath, json);
    if (report->parsed())
      return runReport(rulePath, seedSpec, radius, spectrumOutPrefix, spectrumIters, kgrid);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
