// Fixed-point windows and defect geometry.

#include "catch_amalgamated.hpp"

#include <set>

#include "subst/dictionary.hpp"
#include "subst/fixed_point.hpp"

#include "test_util.hpp"

using namespace subst;
using testutil::loadRule;
using testutil::patchOf;

namespace {

TSpace spaceFor(const SubstitutionRule& rule) {
  return TSpace(rule, TestingDomain::defaultFor(rule));
}

}  // namespace

TEST_CASE("table all-r fixed point has the y-axis strip illegal and nothing else") {
  auto table = loadRule("table");
  TSpace space = spaceFor(table);
  LegalSetResult legal = legalTPatches(table, space);
  FixedPointWindow fp = fixedPointWindow(table, space, patchOf(table, "rr/rr"), 8);
  CHECK(fp.period == 2);
  CHECK(fp.fillIndependent);
  CHECK(fp.certifiedSelfSimilar);
  CHECK(fp.window.restrictedTo(Rect{-1, -1, 0, 0}) == patchOf(table, "rr/rr"));

  DefectMap defects = classifyDefects(fp, space, legal.set);
  CHECK(defects.geometry == DefectGeometry::PureLineY);
  for (Vec2 a : defects.illegalAnchors) CHECK(a.x == 0);
  CHECK(defects.illegalAnchors.size() == 16);  // anchors (0, k), k = -7..8
}

TEST_CASE("chair central fixed point has exactly one illegal anchor") {
  auto chair = loadRule("chair");
  TSpace space = spaceFor(chair);
  LegalSetResult legal = legalTPatches(chair, space);
  FixedPointWindow fp = fixedPointWindow(chair, space, patchOf(chair, "gr/ry"), 8);
  CHECK(fp.period == 1);
  CHECK(fp.fillIndependent);
  CHECK(fp.certifiedSelfSimilar);

  DefectMap defects = classifyDefects(fp, space, legal.set);
  CHECK(defects.geometry == DefectGeometry::Central);
  REQUIRE(defects.illegalAnchors.size() == 1);
  CHECK(defects.illegalAnchors[0] == Vec2{0, 0});
}

TEST_CASE("legal T-periodic anchors give defect-free windows") {
  auto chair = loadRule("chair");
  TSpace space = spaceFor(chair);
  LegalSetResult legal = legalTPatches(chair, space);
  Patch gbrg = patchOf(chair, "gb/rg");  // legal and Psi-fixed
  REQUIRE(legal.set.contains(space.encode(gbrg)));
  FixedPointWindow fp = fixedPointWindow(chair, space, gbrg, 8);
  DefectMap defects = classifyDefects(fp, space, legal.set);
  CHECK(defects.geometry == DefectGeometry::None);
  CHECK(defects.illegalAnchors.empty());
}

TEST_CASE("patches off every Psi-cycle are rejected") {
  auto ex = loadRule("example45");
  TSpace space = spaceFor(ex);
  CHECK_THROWS_AS(fixedPointWindow(ex, space, patchOf(ex, "rb/rr"), 4), NotOnCycleError);
}

TEST_CASE("the bb seed of example45 is a persistent defect with no fixed point") {
  // limit sets of a seed containing the horizontal bb patch keep illegal
  // patches forever, yet none of those patches is Psi-periodic, so no
  // fixed-point representation of the limit exists
  auto ex = loadRule("example45");
  TSpace space = spaceFor(ex);
  LegalSetResult legal = legalTPatches(ex, space);

  Patch bb;
  bb.set({0, 0}, ex.alphabet().index("b"));
  bb.set({1, 0}, ex.alphabet().index("b"));
  SeedConfig seed = SeedConfig::patchFill(bb, ex.alphabet().index("r"));
  DictionaryOrbit orbit = dictionaryOrbit(ex, space, seed);

  PatchSet defects;
  for (const auto& q : orbit.qsets) defects.unionWith(q.minus(legal.set));
  REQUIRE_FALSE(defects.empty());
  for (TPatchCode c : defects.codes())
    CHECK_THROWS_AS(minimalPsiPeriod(ex, space, c), NotOnCycleError);
}

TEST_CASE("the ry/gb table seed produces a cross defect") {
  // the paper asserts a line defect in both directions for seeds containing
  // ry/gb; the witness radius recorded here is 8, stable through 16
  auto table = loadRule("table");
  TSpace space = spaceFor(table);
  LegalSetResult legal = legalTPatches(table, space);
  Patch rygb = patchOf(table, "ry/gb");
  for (int radius : {8, 16}) {
    FixedPointWindow fp = fixedPointWindow(table, space, rygb, radius);
    DefectMap defects = classifyDefects(fp, space, legal.set);
    CHECK(defects.geometry == DefectGeometry::Cross);
  }
  // and the orbit of a configuration containing ry/gb reaches that patch
  SeedConfig seed = SeedConfig::patchFill(rygb, table.alphabet().index("r"));
  DictionaryOrbit orbit = dictionaryOrbit(table, space, seed);
  bool present = false;
  for (const auto& q : orbit.qsets) present |= q.contains(space.encode(rygb));
  CHECK(present);
}

TEST_CASE("defect geometry is stable from radius 8 to 16") {
  auto table = loadRule("table");
  TSpace tspace = spaceFor(table);
  LegalSetResult tlegal = legalTPatches(table, tspace);
  for (int r : {8, 16}) {
    FixedPointWindow fp = fixedPointWindow(table, tspace, patchOf(table, "rr/rr"), r);
    CHECK(classifyDefects(fp, tspace, tlegal.set).geometry == DefectGeometry::PureLineY);
  }
  auto chair = loadRule("chair");
  TSpace cspace = spaceFor(chair);
  LegalSetResult clegal = legalTPatches(chair, cspace);
  for (int r : {8, 16}) {
    FixedPointWindow fp = fixedPointWindow(chair, cspace, patchOf(chair, "gr/ry"), r);
    CHECK(classifyDefects(fp, cspace, clegal.set).geometry == DefectGeometry::Central);
  }
}

TEST_CASE("small windows report unknown-tagged other geometry") {
  auto chair = loadRule("chair");
  TSpace space = spaceFor(chair);
  LegalSetResult legal = legalTPatches(chair, space);
  FixedPointWindow fp = fixedPointWindow(chair, space, patchOf(chair, "gr/ry"), 3);
  DefectMap defects = classifyDefects(fp, space, legal.set);
  CHECK(defects.geometry == DefectGeometry::Other);
  CHECK(defects.radiusTooSmall);
}

TEST_CASE("half-plane content of the table fixed point is legal at radius 3") {
  auto table = loadRule("table");
  TSpace space = spaceFor(table);
  LegalSetResult legal = legalTPatches(table, space);
  FixedPointWindow fp = fixedPointWindow(table, space, patchOf(table, "rr/rr"), 12);
  auto legalBall = limitDictionary(table, space, legal.set, 1, 3);
  std::set<Patch> legalBallSet(legalBall.begin(), legalBall.end());

  int checked = 0;
  for (int cy = -9; cy <= 9; ++cy)
    for (int cx = -9; cx <= 9; ++cx) {
      // balls avoiding the strip x in {-1, 0}
      if (cx >= -4 && cx <= 3) continue;
      Patch sub;
      for (int y = -3; y <= 3; ++y)
        for (int x = -3; x <= 3; ++x) sub.set({x, y}, fp.window.at({cx + x, cy + y}));
      CHECK(legalBallSet.count(sub) == 1);
      ++checked;
    }
  CHECK(checked > 100);
}

TEST_CASE("strip-anchored patches of the table fixed point are exactly the Q defects") {
  auto table = loadRule("table");
  TSpace space = spaceFor(table);
  LegalSetResult legal = legalTPatches(table, space);
  DictionaryOrbit orbit = dictionaryOrbit(table, space,
                                          SeedConfig::constant(table.alphabet().index("r")));
  PatchSet stripPatches;
  FixedPointWindow fp = fixedPointWindow(table, space, patchOf(table, "rr/rr"), 12);
  for (int k = -11; k <= 12; ++k) stripPatches.insert(space.encodeAt(fp.window, {0, k}));
  // every strip patch is a defect of Q_0 and every Q_0 defect shows up
  PatchSet q0Defects = orbit.qsets[0].minus(legal.set);
  CHECK(stripPatches.subsetOf(q0Defects));
  CHECK(q0Defects.subsetOf(stripPatches));
}

TEST_CASE("fixed point inclusion: reflexive case verifies all radii") {
  auto chair = loadRule("chair");
  TSpace space = spaceFor(chair);
  Patch central = patchOf(chair, "gr/ry");
  InclusionReport report = fixedPointDictionaryInclusion(chair, space, central, central, 12);
  CHECK(report.allVerified);
  CHECK(report.largestVerified == report.sMax);
}

TEST_CASE("legal patches of the table fixed point are included at s = 4") {
  auto table = loadRule("table");
  TSpace space = spaceFor(table);
  LegalSetResult legal = legalTPatches(table, space);
  FixedPointWindow fp = fixedPointWindow(table, space, patchOf(table, "rr/rr"), 16);
  // pick a legal patch occurring away from the strip
  Patch p = space.decode(space.encodeAt(fp.window, {6, 3}));
  REQUIRE(legal.set.contains(space.encode(p)));
  InclusionReport report =
      fixedPointDictionaryInclusion(table, space, p, patchOf(table, "rr/rr"), 48);
  CHECK(report.largestVerified >= 4);
}

TEST_CASE("chair legal patches are included in the central fixed point") {
  auto chair = loadRule("chair");
  TSpace space = spaceFor(chair);
  LegalSetResult legal = legalTPatches(chair, space);
  FixedPointWindow fp = fixedPointWindow(chair, space, patchOf(chair, "gr/ry"), 16);
  // a legal Psi-periodic patch occurring in the window
  Patch p = patchOf(chair, "gb/rg");
  REQUIRE(legal.set.contains(space.encode(p)));
  InclusionReport report =
      fixedPointDictionaryInclusion(chair, space, p, patchOf(chair, "gr/ry"), 48);
  CHECK(report.allVerified);
  CHECK(report.largestVerified == 4);
}

TEST_CASE("inclusion preconditions are reported, not silently false") {
  auto table = loadRule("table");
  TSpace space = spaceFor(table);
  // gg/gg is illegal, T-periodic (the table rule is T-bijective), and does
  // not occur in the all-r fixed point window
  CHECK_THROWS_AS(fixedPointDictionaryInclusion(table, space, patchOf(table, "gg/gg"),
                                                patchOf(table, "rr/rr"), 12),
                  ValidationError);
  auto ex = loadRule("example45");
  TSpace exSpace = spaceFor(ex);
  CHECK_THROWS_AS(fixedPointDictionaryInclusion(ex, exSpace, patchOf(ex, "rb/rr"),
                                                patchOf(ex, "rr/rr"), 8),
                  NotOnCycleError);
}
