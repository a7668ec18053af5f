#pragma once

// Finite windows of the S-fixed points rho_Q attached to T-periodic patches,
// and classification of the defect geometry those windows exhibit.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "subst/dictionary.hpp"
#include "subst/errors.hpp"
#include "subst/tpatch_graph.hpp"
#include "subst/window.hpp"

namespace subst {

// Minimal p with Psi^p(Q) = Q; throws NotOnCycleError when Q is not
// Psi-periodic (its forward orbit cycles elsewhere).
inline int minimalPsiPeriod(const SubstitutionRule& rule, const TSpace& space, TPatchCode q) {
  PsiMap next(rule, space);
  TPatchCode v = q;
  for (TPatchCode steps = 1; steps <= space.count() + 1; ++steps) {
    v = next(v);
    if (v == q) return (int)steps;
  }
  throw NotOnCycleError("patch is not T-periodic (not on a Psi-cycle)");
}

struct FixedPointWindow {
  Patch anchorQ;                    // window restricted to T equals this
  int period = 1;                   // minimal Psi-period p of Q
  int radius = 0;
  Patch window;                     // rho_Q on B(radius)
  bool fillIndependent = false;     // recomputed with a second fill letter
  bool certifiedSelfSimilar = false;  // S^p applied to the window reproduces it
};

// Window of rho_Q = lim S^{np}(rho) on B(r), where rho is Q extended by a
// constant fill. Once F(np, T) covers B(r) the window reads only Q, so the
// result is fill independent; this is verified by recomputation rather than
// assumed.
inline FixedPointWindow fixedPointWindow(const SubstitutionRule& rule, const TSpace& space,
                                         const Patch& q, int radius) {
  TPatchCode code = space.encode(q);
  FixedPointWindow out;
  out.anchorQ = q;
  out.radius = radius;
  out.period = minimalPsiPeriod(rule, space, code);

  int cover = space.domain().containmentExponent(rule, radius);
  int iters = ((cover + out.period - 1) / out.period) * out.period;
  Rect ball = Rect::ball(radius);

  SeedConfig seed0 = SeedConfig::patchFill(q, (LetterIndex)0);
  out.window = iterateWindow(rule, seed0, iters, ball);
  if (rule.alphabet().size() > 1) {
    SeedConfig seed1 = SeedConfig::patchFill(q, (LetterIndex)1);
    out.fillIndependent = (out.window == iterateWindow(rule, seed1, iters, ball));
  } else {
    out.fillIndependent = true;
  }

  // window restricted to T must reproduce Q
  for (Vec2 t : space.domain().offsets())
    if (out.window.at(t) != q.at(t))
      throw NumericError("fixed-point window does not restrict to its anchor patch");

  out.certifiedSelfSimilar =
      (rule.substitutePow(out.window, out.period).restrictedTo(ball) == out.window);
  return out;
}

enum class DefectGeometry { None, Central, PureLineX, PureLineY, Cross, Other };

inline std::string geometryName(DefectGeometry g) {
  switch (g) {
    case DefectGeometry::None: return "none";
    case DefectGeometry::Central: return "central";
    case DefectGeometry::PureLineX: return "pure-line-e1";
    case DefectGeometry::PureLineY: return "pure-line-e2";
    case DefectGeometry::Cross: return "cross";
    default: return "other";
  }
}

struct DefectMap {
  int radius = 0;
  std::vector<Vec2> illegalAnchors;  // canonical order
  DefectGeometry geometry = DefectGeometry::None;
  bool radiusTooSmall = false;  // geometry reported Other below radius 4
};

// Scans every anchor whose T-translate fits in the window and classifies the
// illegal-anchor geometry: empty, only the origin, exactly one coordinate
// axis, both axes, or anything else.
inline DefectMap classifyDefects(const FixedPointWindow& fp, const TSpace& space,
                                 const PatchSet& legal) {
  DefectMap out;
  out.radius = fp.radius;
  Rect ball = Rect::ball(fp.radius);
  Rect tr = space.domain().boundingRect();
  Rect anchors{ball.x0 - tr.x0, ball.y0 - tr.y0, ball.x1 - tr.x1, ball.y1 - tr.y1};

  std::vector<Vec2> xAxis, yAxis;
  for (int y = anchors.y1; y >= anchors.y0; --y)
    for (int x = anchors.x0; x <= anchors.x1; ++x) {
      Vec2 a{x, y};
      if (!legal.contains(space.encodeAt(fp.window, a))) out.illegalAnchors.push_back(a);
      if (y == 0) xAxis.push_back(a);
      if (x == 0) yAxis.push_back(a);
    }

  if (fp.radius < 4) {
    out.geometry = DefectGeometry::Other;
    out.radiusTooSmall = true;
    return out;
  }

  auto equals = [](const std::vector<Vec2>& a, std::vector<Vec2> b) {
    std::sort(b.begin(), b.end(), CanonicalLess{});
    return a == b;
  };
  std::vector<Vec2> both = xAxis;
  both.insert(both.end(), yAxis.begin(), yAxis.end());
  std::sort(both.begin(), both.end(), CanonicalLess{});
  both.erase(std::unique(both.begin(), both.end(),
                         [](Vec2 u, Vec2 v) { return u == v; }),
             both.end());

  if (out.illegalAnchors.empty())
    out.geometry = DefectGeometry::None;
  else if (out.illegalAnchors.size() == 1 && out.illegalAnchors[0] == Vec2{0, 0})
    out.geometry = DefectGeometry::Central;
  else if (equals(out.illegalAnchors, yAxis))
    out.geometry = DefectGeometry::PureLineY;
  else if (equals(out.illegalAnchors, xAxis))
    out.geometry = DefectGeometry::PureLineX;
  else if (out.illegalAnchors == both)
    out.geometry = DefectGeometry::Cross;
  else
    out.geometry = DefectGeometry::Other;
  return out;
}

struct InclusionReport {
  int largestVerified = 0;  // largest s with every B(s)-subpatch of rho_P in rho_Q's window
  int sMax = 0;
  bool allVerified = false;
  std::optional<Patch> failingSubpatch;
};

namespace detail {

// Does `sub` (supported on a ball) occur as a translate inside `window`?
inline bool occursIn(const Patch& sub, const Patch& window) {
  Rect ss = sub.supportRect();
  Rect ws = window.supportRect();
  for (int ay = ws.y0 - ss.y0; ay <= ws.y1 - ss.y1; ++ay)
    for (int ax = ws.x0 - ss.x0; ax <= ws.x1 - ss.x1; ++ax) {
      bool match = true;
      for (const auto& [v, a] : sub.cells()) {
        if (window.at({v.x + ax, v.y + ay}) != a) {
          match = false;
          break;
        }
      }
      if (match) return true;
    }
  return false;
}

}  // namespace detail

// Finite-radius proxy for the orbit-closure inclusion Orb(rho_P) within
// Orb(rho_Q): every B(s)-subpatch of rho_P's window must occur somewhere in
// rho_Q's window, for s up to sMax. The source window is smaller than the
// scan window by a fixed slack factor, since occurrences of rho_P content may
// sit far from rho_Q's origin. Both patches must be T-periodic and P must
// occur in rho_Q's window; violations are reported as errors rather than
// silently returning false. The verdict is only ever claimed at the verified
// radius, never asymptotically.
inline InclusionReport fixedPointDictionaryInclusion(const SubstitutionRule& rule,
                                                     const TSpace& space, const Patch& p,
                                                     const Patch& q, int radius,
                                                     int sMax = 4) {
  FixedPointWindow wq = fixedPointWindow(rule, space, q, radius);  // throws NotOnCycle
  int sourceRadius = std::max(2 * sMax, radius / 8);
  FixedPointWindow wp = fixedPointWindow(rule, space, p, sourceRadius);

  TPatchCode pCode = space.encode(p);
  bool occurs = false;
  Rect ball = Rect::ball(radius);
  Rect tr = space.domain().boundingRect();
  for (int ay = ball.y0 - tr.y0; ay <= ball.y1 - tr.y1 && !occurs; ++ay)
    for (int ax = ball.x0 - tr.x0; ax <= ball.x1 - tr.x1 && !occurs; ++ax)
      occurs = (space.encodeAt(wq.window, {ax, ay}) == pCode);
  if (!occurs)
    throw ValidationError("precondition violated: P does not occur in rho_Q's window at radius " +
                          std::to_string(radius));

  InclusionReport report;
  report.sMax = std::min(sMax, sourceRadius / 2);
  for (int s = 1; s <= report.sMax; ++s) {
    std::set<Patch> subs;
    for (int cy = -sourceRadius + s; cy <= sourceRadius - s; ++cy)
      for (int cx = -sourceRadius + s; cx <= sourceRadius - s; ++cx) {
        Patch sub;
        for (int y = -s; y <= s; ++y)
          for (int x = -s; x <= s; ++x) sub.set({x, y}, wp.window.at({cx + x, cy + y}));
        subs.insert(std::move(sub));
      }
    for (const Patch& sub : subs) {
      if (!detail::occursIn(sub, wq.window)) {
        report.failingSubpatch = sub;
        return report;
      }
    }
    report.largestVerified = s;
  }
  report.allVerified = (report.largestVerified == report.sMax);
  return report;
}

}  // namespace subst
