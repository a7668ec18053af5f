#pragma once

// Window evaluation of substitution iterates by per-cell digit descent:
// gamma decomposes as D(eta) + f, so S^n(omega)(gamma) is obtained by
// splitting off n digits, reading omega at the final coordinate, and folding
// the rule back over the digits. Cost is O(n) per cell, independent of the
// iterate's support size.

#include <vector>

#include "subst/lattice.hpp"
#include "subst/patch.hpp"
#include "subst/rule.hpp"
#include "subst/seed.hpp"

namespace subst {

inline LetterIndex iterateAt(const SubstitutionRule& rule, const SeedConfig& seed, int n,
                             Vec2 gamma) {
  if (n < 0) throw ValidationError("iteration count must be non-negative");
  std::vector<Vec2> digits;
  digits.reserve((size_t)n);
  Vec2 g = gamma;
  for (int i = 0; i < n; ++i) {
    auto [eta, f] = rule.splitDigit(g);
    digits.push_back(f);
    g = eta;
  }
  LetterIndex a = seed.letterAt(g);
  for (int i = n - 1; i >= 0; --i) a = rule.image(a, digits[i]);
  return a;
}

// S^n(seed) restricted to `window`.
inline Patch iterateWindow(const SubstitutionRule& rule, const SeedConfig& seed, int n,
                           const Rect& window) {
  seed.validate(rule.alphabet());
  Patch out;
  for (int y = window.y1; y >= window.y0; --y)
    for (int x = window.x0; x <= window.x1; ++x)
      out.set({x, y}, iterateAt(rule, seed, n, {x, y}));
  return out;
}

}  // namespace subst
