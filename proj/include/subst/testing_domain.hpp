#pragma once

// Convenient testing domain T. The default for block rules is {-1,0}^2.
// Condition (b) of the definition (one substitution step of a T-patch
// contains a T-translate around any position) is verified exactly over a
// finite range; condition (a) (iterates of T-patches eventually cover any
// ball uniformly) is certified constructively through the exponent
// n_r = smallest n with min(w,h)^n >= 2r + max(w,h).

#include <algorithm>
#include <string>
#include <vector>

#include "subst/errors.hpp"
#include "subst/lattice.hpp"
#include "subst/patch.hpp"
#include "subst/rule.hpp"

namespace subst {

class TestingDomain {
 public:
  // Builds T = {-1,0}^2 for the given rule and verifies the testing-domain
  // conditions. Rules with a block dimension of 1 do not expand in all
  // directions and are rejected here (not at rule construction).
  static TestingDomain defaultFor(const SubstitutionRule& rule) {
    std::vector<Vec2> offsets;
    for (int y = 0; y >= -1; --y)
      for (int x = -1; x <= 0; ++x) offsets.push_back({x, y});
    return TestingDomain(rule, std::move(offsets));
  }

  TestingDomain(const SubstitutionRule& rule, std::vector<Vec2> offsets)
      : offsets_(std::move(offsets)) {
    if (offsets_.empty()) throw ValidationError("testing domain must not be empty");
    std::sort(offsets_.begin(), offsets_.end(), CanonicalLess{});
    if ((long long)offsets_.size() != boundingRect().area())
      throw ValidationError("testing domain must fill a rectangle");
    if (std::min(rule.blockWidth(), rule.blockHeight()) < 2)
      throw ValidationError(
          "testing-domain analysis requires both block dimensions >= 2 "
          "(rule does not expand in all directions)");
    verifyConditionB(rule);
  }

  const std::vector<Vec2>& offsets() const { return offsets_; }
  int size() const { return (int)offsets_.size(); }

  Rect boundingRect() const {
    Rect r{offsets_[0].x, offsets_[0].y, offsets_[0].x, offsets_[0].y};
    for (Vec2 v : offsets_) {
      r.x0 = std::min(r.x0, v.x);
      r.x1 = std::max(r.x1, v.x);
      r.y0 = std::min(r.y0, v.y);
      r.y1 = std::max(r.y1, v.y);
    }
    return r;
  }

  // Index of an offset in canonical order, -1 if absent.
  int indexOf(Vec2 v) const {
    for (size_t i = 0; i < offsets_.size(); ++i)
      if (offsets_[i] == v) return (int)i;
    return -1;
  }

  Patch patchOnT(const std::vector<LetterIndex>& letters) const {
    if (letters.size() != offsets_.size())
      throw ValidationError("letter count does not match testing domain size");
    Patch p;
    for (size_t i = 0; i < offsets_.size(); ++i) p.set(offsets_[i], letters[i]);
    return p;
  }

  // Smallest n such that S^n of any T-patch covers, uniformly in position,
  // a translate of every linf ball of radius r (condition (a), constructive
  // form for block rules).
  int coveringExponent(const SubstitutionRule& rule, int r) const {
    int base = std::min(rule.blockWidth(), rule.blockHeight());
    int need = 2 * r + std::max(rule.blockWidth(), rule.blockHeight());
    long long pw = 1;
    for (int n = 1; n <= 64; ++n) {
      pw *= base;
      if (pw >= need) return n;
      if (pw > (1ll << 40)) break;
    }
    throw BudgetError("covering exponent for radius " + std::to_string(r) + " not found");
  }

  // Smallest n with F(n, T) containing the ball B(r) around the origin
  // (pointwise containment, used for window evaluation of fixed points).
  int containmentExponent(const SubstitutionRule& rule, int r) const {
    for (int n = 0; n <= 64; ++n) {
      Rect f = rule.iterateSupportOfRect(n, boundingRect());
      if (f.contains(Rect::ball(r))) return n;
    }
    throw BudgetError("containment exponent for radius " + std::to_string(r) + " not found");
  }

 private:
  // Exact check of condition (b) over a verification range: for each x there
  // is gamma with x+T inside F(1, gamma+T), and gamma = 0 works for x = 0.
  void verifyConditionB(const SubstitutionRule& rule) const {
    int w = rule.blockWidth(), h = rule.blockHeight();
    Rect tr = boundingRect();
    int range = 2 * std::max(w, h) + 2;
    for (int x = -range; x <= range; ++x) {
      for (int y = -range; y <= range; ++y) {
        bool found = false;
        for (int gx = floor_div(x - 1, w) - 1; gx <= floor_div(x + 1, w) + 1 && !found; ++gx) {
          for (int gy = floor_div(y - 1, h) - 1; gy <= floor_div(y + 1, h) + 1 && !found; ++gy) {
            if (x == 0 && y == 0 && (gx != 0 || gy != 0)) continue;  // gamma(e) = e
            // F(1, gamma+T) as a rect union; for rectangular T it is a rect.
            Rect f1 = rule.iterateSupportOfRect(1, Rect{gx + tr.x0, gy + tr.y0,
                                                        gx + tr.x1, gy + tr.y1});
            Rect xt{x + tr.x0, y + tr.y0, x + tr.x1, y + tr.y1};
            if (f1.contains(xt)) found = true;
          }
        }
        if (!found)
          throw ValidationError("testing-domain condition (b) fails at x=(" +
                                std::to_string(x) + "," + std::to_string(y) + ")");
      }
    }
  }

  std::vector<Vec2> offsets_;  // canonical order
};

}  // namespace subst
