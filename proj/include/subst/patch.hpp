#pragma once

// A patch is a letter assignment on a finite subset of Z^2. Equality is
// support-plus-letters with no implicit translation; translation equivalence
// is a separate predicate. Cells iterate in canonical order (top row first),
// so printing a patch reproduces the visual block layout.

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "subst/alphabet.hpp"
#include "subst/errors.hpp"
#include "subst/lattice.hpp"

namespace subst {

class Patch {
 public:
  using CellMap = std::map<Vec2, LetterIndex, CanonicalLess>;

  Patch() = default;

  bool empty() const { return cells_.empty(); }
  size_t size() const { return cells_.size(); }

  bool contains(Vec2 v) const { return cells_.count(v) != 0; }

  LetterIndex at(Vec2 v) const {
    auto it = cells_.find(v);
    if (it == cells_.end())
      throw ValidationError("patch has no cell at (" + std::to_string(v.x) + "," +
                            std::to_string(v.y) + ")");
    return it->second;
  }

  void set(Vec2 v, LetterIndex a) { cells_[v] = a; }

  const CellMap& cells() const { return cells_; }

  // Bounding box of the support; empty Rect for the empty patch.
  Rect supportRect() const {
    if (cells_.empty()) return Rect{};
    int x0 = cells_.begin()->first.x, x1 = x0;
    int y0 = cells_.begin()->first.y, y1 = y0;
    for (const auto& [v, a] : cells_) {
      (void)a;
      if (v.x < x0) x0 = v.x;
      if (v.x > x1) x1 = v.x;
      if (v.y < y0) y0 = v.y;
      if (v.y > y1) y1 = v.y;
    }
    return Rect{x0, y0, x1, y1};
  }

  Patch translated(Vec2 by) const {
    Patch out;
    for (const auto& [v, a] : cells_) out.cells_.emplace(v + by, a);
    return out;
  }

  Patch restrictedTo(const Rect& r) const {
    Patch out;
    for (const auto& [v, a] : cells_)
      if (r.contains(v)) out.cells_.emplace(v, a);
    return out;
  }

  friend bool operator==(const Patch& a, const Patch& b) { return a.cells_ == b.cells_; }
  friend bool operator!=(const Patch& a, const Patch& b) { return !(a == b); }

  // Deterministic total order (support in canonical order, then letters).
  friend bool operator<(const Patch& a, const Patch& b) {
    CanonicalLess less;
    auto ia = a.cells_.begin(), ib = b.cells_.begin();
    for (; ia != a.cells_.end() && ib != b.cells_.end(); ++ia, ++ib) {
      if (less(ia->first, ib->first)) return true;
      if (less(ib->first, ia->first)) return false;
      if (ia->second != ib->second) return ia->second < ib->second;
    }
    return ia == a.cells_.end() && ib != b.cells_.end();
  }

  // Equivalence up to translation: equal after moving both bounding-box
  // minima to the origin. Reflexive/symmetric/transitive by construction.
  bool equivalentUpToTranslation(const Patch& other) const {
    if (cells_.size() != other.cells_.size()) return false;
    if (empty()) return true;
    Rect ra = supportRect(), rb = other.supportRect();
    return translated({-ra.x0, -ra.y0}) == other.translated({-rb.x0, -rb.y0});
  }

  void validateLetters(const Alphabet& alphabet) const {
    for (const auto& [v, a] : cells_) {
      (void)v;
      if (a >= alphabet.size())
        throw ValidationError("patch letter index " + std::to_string(a) + " outside alphabet");
    }
  }

  // Visual literal: rows top to bottom separated by '/'. Letters are joined
  // without separators when all names are single characters, else by spaces.
  // Only defined for patches with full rectangular support.
  std::string toLiteral(const Alphabet& alphabet) const {
    Rect r = supportRect();
    if (empty()) return "";
    if ((long long)cells_.size() != r.area())
      throw ValidationError("patch literal requires rectangular support");
    bool compact = alphabet.singleCharNames();
    std::ostringstream out;
    for (int y = r.y1; y >= r.y0; --y) {
      if (y != r.y1) out << "/";
      for (int x = r.x0; x <= r.x1; ++x) {
        if (x != r.x0 && !compact) out << " ";
        out << alphabet.name(at({x, y}));
      }
    }
    return out.str();
  }

 private:
  CellMap cells_;
};

namespace detail {

inline std::vector<std::string> splitRowTokens(const std::string& row, const Alphabet& alphabet,
                                               const std::string& context) {
  std::vector<std::string> tokens;
  std::istringstream in(row);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  if (tokens.size() == 1 && tokens[0].size() > 1 && alphabet.singleCharNames()) {
    // compact form: one char per letter
    std::vector<std::string> chars;
    for (char c : tokens[0]) chars.emplace_back(1, c);
    tokens = std::move(chars);
  }
  if (tokens.empty()) throw ValidationError(context + ": empty row");
  return tokens;
}

}  // namespace detail

// Parse a visual patch literal ("rr/rr" or "r r / r r"). The result is
// anchored with its top-right cell at the origin, i.e. a w x h literal
// occupies {-(w-1),...,0} x {-(h-1),...,0}; a 2x2 literal sits exactly on the
// default testing domain {-1,0}^2.
inline Patch parsePatchLiteral(const Alphabet& alphabet, const std::string& literal) {
  std::vector<std::string> rows;
  std::string cur;
  for (char c : literal) {
    if (c == '/') {
      rows.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  rows.push_back(cur);
  int h = (int)rows.size();
  Patch p;
  int w = -1;
  for (int i = 0; i < h; ++i) {
    auto tokens = detail::splitRowTokens(rows[i], alphabet, "patch literal row " + std::to_string(i + 1));
    if (w < 0) w = (int)tokens.size();
    if ((int)tokens.size() != w)
      throw ValidationError("patch literal row " + std::to_string(i + 1) + " has " +
                            std::to_string(tokens.size()) + " letters, expected " +
                            std::to_string(w));
    for (int j = 0; j < w; ++j) p.set({j - (w - 1), -i}, alphabet.index(tokens[j]));
  }
  return p;
}

}  // namespace subst
