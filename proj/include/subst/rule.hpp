#pragma once

// Block substitution rules on Z^2: each letter maps to a w x h block of
// letters, extended to patches letterwise through the expansion
// D(x,y) = (w*x, h*y). Rule literals list rows top to bottom; row i, column j
// is block coordinate (j, h-1-i).

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "subst/alphabet.hpp"
#include "subst/errors.hpp"
#include "subst/lattice.hpp"
#include "subst/patch.hpp"

namespace subst {

class SubstitutionRule {
 public:
  SubstitutionRule(std::string name, Alphabet alphabet, int blockWidth, int blockHeight,
                   std::vector<std::vector<LetterIndex>> blocks)
      : name_(std::move(name)),
        alphabet_(std::move(alphabet)),
        w_(blockWidth),
        h_(blockHeight),
        blocks_(std::move(blocks)) {
    if (w_ < 1 || h_ < 1) throw ValidationError("block dimensions must be positive");
    if (w_ * h_ < 2) throw ValidationError("block must contain at least two cells");
    if ((int)blocks_.size() != alphabet_.size())
      throw ValidationError("rule must define exactly one block per letter");
    for (int a = 0; a < alphabet_.size(); ++a) {
      if ((int)blocks_[a].size() != w_ * h_)
        throw ValidationError("block for letter '" + alphabet_.name((LetterIndex)a) +
                              "' has wrong cell count");
      for (LetterIndex b : blocks_[a])
        if (b >= alphabet_.size())
          throw ValidationError("block for letter '" + alphabet_.name((LetterIndex)a) +
                                "' uses a letter outside the alphabet");
    }
  }

  const std::string& name() const { return name_; }
  const Alphabet& alphabet() const { return alphabet_; }
  int blockWidth() const { return w_; }
  int blockHeight() const { return h_; }

  // Image letter of `a` at block coordinate f in F = {0..w-1} x {0..h-1}.
  LetterIndex image(LetterIndex a, Vec2 f) const { return blocks_[a][f.x + w_ * f.y]; }

  Vec2 expand(Vec2 v) const { return {w_ * v.x, h_ * v.y}; }  // the homomorphism D

  // Unique decomposition gamma = D(eta) + f with f in F.
  std::pair<Vec2, Vec2> splitDigit(Vec2 gamma) const {
    Vec2 f{floor_mod(gamma.x, w_), floor_mod(gamma.y, h_)};
    Vec2 eta{(gamma.x - f.x) / w_, (gamma.y - f.y) / h_};
    return {eta, f};
  }

  Patch letterPatch(LetterIndex a) const {
    Patch p;
    p.set({0, 0}, a);
    return p;
  }

  // Support of S^n applied to a patch supported on `m`:
  // F(n, M) = union over cells of D^n(cell) + F(n, {0}).
  Rect iterateSupportOfRect(int n, const Rect& m) const {
    long long wn = 1, hn = 1;
    for (int i = 0; i < n; ++i) {
      wn *= w_;
      hn *= h_;
      if (wn > (1ll << 40) || hn > (1ll << 40))
        throw BudgetError("iterate support overflows at n=" + std::to_string(n));
    }
    return Rect{(int)(wn * m.x0), (int)(hn * m.y0), (int)(wn * (m.x1 + 1) - 1),
                (int)(hn * (m.y1 + 1) - 1)};
  }

  // One substitution step. Result support is F(1, supp(p)); each image cell
  // D(m)+f carries S0(p(m))(f). Translation covariance S(gamma p) = D(gamma) S(p)
  // holds by construction.
  Patch substitute(const Patch& p) const {
    p.validateLetters(alphabet_);
    Patch out;
    for (const auto& [m, a] : p.cells()) {
      Vec2 base = expand(m);
      for (int fy = 0; fy < h_; ++fy)
        for (int fx = 0; fx < w_; ++fx) out.set(base + Vec2{fx, fy}, image(a, {fx, fy}));
    }
    return out;
  }

  Patch substitutePow(Patch p, int n) const {
    for (int i = 0; i < n; ++i) p = substitute(p);
    return p;
  }

  // Smallest k <= kMax such that every letter occurs in S^k(b) for every b,
  // or nullopt when no such k exists within the bound. Occurrence relations
  // compose boolean-matrix style, so no patch expansion is needed.
  std::optional<int> primitivityExponent(int kMax = 16) const {
    if (kMax < 1) throw ValidationError("primitivity bound must be at least 1");
    int n = alphabet_.size();
    std::vector<std::vector<bool>> occ(n, std::vector<bool>(n, false));  // occ[b][a]: a in S(b)
    for (int b = 0; b < n; ++b)
      for (LetterIndex a : blocks_[b]) occ[b][a] = true;
    auto allTrue = [&](const std::vector<std::vector<bool>>& m) {
      for (const auto& row : m)
        for (bool v : row)
          if (!v) return false;
      return true;
    };
    std::vector<std::vector<bool>> cur = occ;
    for (int k = 1; k <= kMax; ++k) {
      if (allTrue(cur)) return k;
      std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (occ[b][c])
            for (int a = 0; a < n; ++a)
              if (cur[c][a]) next[b][a] = true;
      cur = std::move(next);
    }
    return std::nullopt;
  }

 private:
  std::string name_;
  Alphabet alphabet_;
  int w_;
  int h_;
  std::vector<std::vector<LetterIndex>> blocks_;  // [letter][fx + w*fy]
};

// Parses the substitution definition format:
//
//   name table
//   alphabet r y b g
//   block 2 2
//   rule r
//   y r
//   g r
//   ...
//
// Lines may carry '#' comments. Grids list rows top to bottom. Unknown
// directives, ragged rows, and missing or duplicate rules are rejected with
// the offending line number.
inline SubstitutionRule parseRuleFile(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;

  std::string name;
  std::optional<Alphabet> alphabet;
  int w = 0, h = 0;
  std::vector<std::vector<LetterIndex>> blocks;
  std::vector<bool> defined;

  auto fail = [&](const std::string& msg) -> void {
    throw ValidationError("rule file line " + std::to_string(lineNo) + ": " + msg);
  };

  int pendingLetter = -1;  // letter whose grid rows are being read
  int pendingRow = 0;

  while (std::getline(in, line)) {
    ++lineNo;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;

    if (pendingLetter >= 0) {
      // expecting a grid row of w letters
      std::vector<std::string> tokens{first};
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      if ((int)tokens.size() != w)
        fail("grid row " + std::to_string(pendingRow + 1) + " for letter '" +
             alphabet->name((LetterIndex)pendingLetter) + "' has " +
             std::to_string(tokens.size()) + " letters, expected " + std::to_string(w));
      for (int j = 0; j < w; ++j) {
        if (!alphabet->has(tokens[j])) fail("unknown letter '" + tokens[j] + "' in grid");
        // row pendingRow (top to bottom) -> block y = h-1-pendingRow
        blocks[pendingLetter][j + w * (h - 1 - pendingRow)] = alphabet->index(tokens[j]);
      }
      if (++pendingRow == h) pendingLetter = -1;
      continue;
    }

    if (first == "name") {
      if (!(ls >> name)) fail("expected a name");
    } else if (first == "alphabet") {
      std::vector<std::string> names;
      std::string tok;
      while (ls >> tok) names.push_back(tok);
      try {
        alphabet = Alphabet(names);
      } catch (const ValidationError& e) {
        fail(e.what());
      }
      blocks.assign(alphabet->size(), {});
      defined.assign(alphabet->size(), false);
    } else if (first == "block") {
      if (!(ls >> w >> h)) fail("expected 'block <width> <height>'");
      if (w < 1 || h < 1) fail("block dimensions must be positive");
    } else if (first == "rule") {
      if (!alphabet) fail("'rule' before 'alphabet'");
      if (w < 1 || h < 1) fail("'rule' before 'block'");
      std::string letter;
      if (!(ls >> letter)) fail("expected 'rule <letter>'");
      if (!alphabet->has(letter)) fail("unknown letter '" + letter + "'");
      int a = alphabet->index(letter);
      if (defined[a]) fail("duplicate rule for letter '" + letter + "'");
      defined[a] = true;
      blocks[a].assign((size_t)w * h, 0);
      pendingLetter = a;
      pendingRow = 0;
    } else {
      fail("unknown directive '" + first + "'");
    }
    std::string trailing;
    if (ls >> trailing) fail("unexpected token '" + trailing + "'");
  }

  if (!alphabet) throw ValidationError("rule file missing 'alphabet'");
  if (w < 1 || h < 1) throw ValidationError("rule file missing 'block'");
  if (pendingLetter >= 0)
    throw ValidationError("rule file ends inside the grid for letter '" +
                          alphabet->name((LetterIndex)pendingLetter) + "'");
  for (int a = 0; a < alphabet->size(); ++a)
    if (!defined[a])
      throw ValidationError("rule file missing rule for letter '" +
                            alphabet->name((LetterIndex)a) + "'");
  if (name.empty()) name = "unnamed";
  return SubstitutionRule(name, *alphabet, w, h, std::move(blocks));
}

}  // namespace subst
