#pragma once

// Finite descriptions of initial configurations omega_0: a constant letter,
// a fully periodic configuration, or a finite patch on a constant fill.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "subst/alphabet.hpp"
#include "subst/errors.hpp"
#include "subst/lattice.hpp"
#include "subst/patch.hpp"
#include "subst/rule.hpp"

namespace subst {

// Periodic configuration with period vector (p1, p2); cell letters are
// indexed x + p1*y over residues.
struct PeriodicConfig {
  int p1 = 1;
  int p2 = 1;
  std::vector<LetterIndex> cell;  // size p1*p2

  LetterIndex letterAt(Vec2 v) const {
    return cell[floor_mod(v.x, p1) + p1 * floor_mod(v.y, p2)];
  }

  long long sites() const { return (long long)p1 * p2; }

  void validate(const Alphabet& alphabet) const {
    if (p1 < 1 || p2 < 1) throw ValidationError("period vector must be positive");
    if ((long long)cell.size() != sites())
      throw ValidationError("periodic cell size does not match the period vector");
    for (LetterIndex a : cell)
      if (a >= alphabet.size()) throw ValidationError("periodic cell letter outside alphabet");
  }

  friend bool operator==(const PeriodicConfig& a, const PeriodicConfig& b) {
    return a.p1 == b.p1 && a.p2 == b.p2 && a.cell == b.cell;
  }
};

class SeedConfig {
 public:
  struct Constant {
    LetterIndex letter;
  };
  struct PatchFill {
    Patch patch;
    LetterIndex fill;
  };

  static SeedConfig constant(LetterIndex a) { return SeedConfig(Constant{a}); }
  static SeedConfig periodic(PeriodicConfig cfg) { return SeedConfig(std::move(cfg)); }
  static SeedConfig patchFill(Patch p, LetterIndex fill) {
    if (p.empty()) throw ValidationError("patch seed must not be empty");
    return SeedConfig(PatchFill{std::move(p), fill});
  }

  bool isConstant() const { return std::holds_alternative<Constant>(v_); }
  bool isPeriodic() const { return std::holds_alternative<PeriodicConfig>(v_); }
  bool isPatchFill() const { return std::holds_alternative<PatchFill>(v_); }

  const PeriodicConfig& periodicConfig() const { return std::get<PeriodicConfig>(v_); }
  const PatchFill& patchFill() const { return std::get<PatchFill>(v_); }

  LetterIndex letterAt(Vec2 g) const {
    if (auto* c = std::get_if<Constant>(&v_)) return c->letter;
    if (auto* p = std::get_if<PeriodicConfig>(&v_)) return p->letterAt(g);
    const auto& pf = std::get<PatchFill>(v_);
    return pf.patch.contains(g) ? pf.patch.at(g) : pf.fill;
  }

  // Periodic view when one exists (constant seeds are 1x1 periodic).
  std::optional<PeriodicConfig> asPeriodic() const {
    if (auto* c = std::get_if<Constant>(&v_)) return PeriodicConfig{1, 1, {c->letter}};
    if (auto* p = std::get_if<PeriodicConfig>(&v_)) return *p;
    return std::nullopt;
  }

  void validate(const Alphabet& alphabet) const {
    if (auto* c = std::get_if<Constant>(&v_)) {
      if (c->letter >= alphabet.size()) throw ValidationError("seed letter outside alphabet");
    } else if (auto* p = std::get_if<PeriodicConfig>(&v_)) {
      p->validate(alphabet);
    } else {
      const auto& pf = std::get<PatchFill>(v_);
      pf.patch.validateLetters(alphabet);
      if (pf.fill >= alphabet.size()) throw ValidationError("fill letter outside alphabet");
    }
  }

  std::string describe(const Alphabet& alphabet) const {
    if (auto* c = std::get_if<Constant>(&v_)) return "const:" + alphabet.name(c->letter);
    if (auto* p = std::get_if<PeriodicConfig>(&v_))
      return "periodic:" + std::to_string(p->p1) + "x" + std::to_string(p->p2);
    const auto& pf = std::get<PatchFill>(v_);
    return "patch:" + pf.patch.toLiteral(alphabet) + ":fill=" + alphabet.name(pf.fill);
  }

 private:
  using Variant = std::variant<Constant, PeriodicConfig, PatchFill>;
  explicit SeedConfig(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// Parses the periodic-seed file format:
//
//   period 2 2
//   cell
//   b r
//   r b
//
// Cell rows are listed top to bottom (row i is residue y = p2-1-i).
inline PeriodicConfig parseSeedFile(const Alphabet& alphabet, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  int p1 = 0, p2 = 0;
  std::vector<LetterIndex> cell;
  int pendingRow = -1;

  auto fail = [&](const std::string& msg) -> void {
    throw ValidationError("seed file line " + std::to_string(lineNo) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineNo;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;

    if (pendingRow >= 0) {
      std::vector<std::string> tokens{first};
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      if ((int)tokens.size() != p1)
        fail("cell row " + std::to_string(pendingRow + 1) + " has " +
             std::to_string(tokens.size()) + " letters, expected " + std::to_string(p1));
      for (int j = 0; j < p1; ++j) {
        if (!alphabet.has(tokens[j])) fail("unknown letter '" + tokens[j] + "'");
        cell[j + p1 * (p2 - 1 - pendingRow)] = alphabet.index(tokens[j]);
      }
      if (++pendingRow == p2) pendingRow = -1;
      continue;
    }

    if (first == "period") {
      if (!(ls >> p1 >> p2)) fail("expected 'period <p1> <p2>'");
      if (p1 < 1 || p2 < 1) fail("period vector must be positive");
    } else if (first == "cell") {
      if (p1 < 1 || p2 < 1) fail("'cell' before 'period'");
      cell.assign((size_t)p1 * p2, 0);
      pendingRow = 0;
    } else {
      fail("unknown directive '" + first + "'");
    }
  }
  if (p1 < 1 || p2 < 1) throw ValidationError("seed file missing 'period'");
  if (cell.empty()) throw ValidationError("seed file missing 'cell'");
  if (pendingRow >= 0) throw ValidationError("seed file ends inside the cell grid");
  PeriodicConfig cfg{p1, p2, std::move(cell)};
  cfg.validate(alphabet);
  return cfg;
}

// Parses a CLI seed spec: "const:<letter>", "periodic:<file>", or
// "patch:<literal>[:fill=<letter>]" (fill defaults to the first letter).
inline SeedConfig parseSeedSpec(const Alphabet& alphabet, const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw ValidationError("seed spec must look like const:<letter>, periodic:<file>, "
                          "or patch:<literal>");
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "const") {
    return SeedConfig::constant(alphabet.index(rest));
  }
  if (kind == "periodic") {
    std::ifstream in(rest);
    if (!in) throw ValidationError("cannot open seed file '" + rest + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return SeedConfig::periodic(parseSeedFile(alphabet, buf.str()));
  }
  if (kind == "patch") {
    std::string literal = rest;
    LetterIndex fill = 0;
    auto fillPos = rest.rfind(":fill=");
    if (fillPos != std::string::npos) {
      literal = rest.substr(0, fillPos);
      fill = alphabet.index(rest.substr(fillPos + 6));
    }
    return SeedConfig::patchFill(parsePatchLiteral(alphabet, literal), fill);
  }
  throw ValidationError("unknown seed kind '" + kind + "'");
}

}  // namespace subst
