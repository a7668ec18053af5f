// Core substitution machinery: rules, patches, window evaluation by digit
// descent, primitivity, and the testing domain.

#include "catch_amalgamated.hpp"

#include <random>

#include "subst/dictionary.hpp"
#include "subst/rule.hpp"
#include "subst/seed.hpp"
#include "subst/testing_domain.hpp"
#include "subst/window.hpp"

#include "test_util.hpp"

using namespace subst;
using testutil::loadRule;
using testutil::patchOf;

TEST_CASE("table rule parses with the paper's blocks") {
  auto table = loadRule("table");
  CHECK(table.name() == "table");
  CHECK(table.alphabet().size() == 4);
  CHECK(table.blockWidth() == 2);
  CHECK(table.blockHeight() == 2);
  LetterIndex r = table.alphabet().index("r");
  // r maps to the block with top row (y, r) and bottom row (g, r)
  CHECK(table.alphabet().name(table.image(r, {0, 1})) == "y");
  CHECK(table.alphabet().name(table.image(r, {1, 1})) == "r");
  CHECK(table.alphabet().name(table.image(r, {0, 0})) == "g");
  CHECK(table.alphabet().name(table.image(r, {1, 0})) == "r");
}

TEST_CASE("substituting a single table letter gives its block") {
  auto table = loadRule("table");
  Patch p = table.substitute(table.letterPatch(table.alphabet().index("r")));
  CHECK(p.size() == 4);
  CHECK(p.toLiteral(table.alphabet()) == "yr/gr");
}

TEST_CASE("substituting the empty patch gives the empty patch") {
  auto table = loadRule("table");
  CHECK(table.substitute(Patch{}).empty());
}

TEST_CASE("letters outside the alphabet are rejected") {
  auto table = loadRule("table");
  Patch bad;
  bad.set({0, 0}, 250);
  CHECK_THROWS_AS(table.substitute(bad), ValidationError);
}

TEST_CASE("the all-r table patch reproduces itself after two substitutions") {
  auto table = loadRule("table");
  Patch q0 = patchOf(table, "rr/rr");
  Rect t{-1, -1, 0, 0};
  Patch once = table.substitute(q0);
  Patch twice = table.substitute(once);
  CHECK(once.restrictedTo(t).toLiteral(table.alphabet()) == "rg/ry");
  CHECK(twice.restrictedTo(t) == q0);
}

TEST_CASE("chair constant-r iterates pin the central patch for n in 1..12") {
  auto chair = loadRule("chair");
  SeedConfig seed = SeedConfig::constant(chair.alphabet().index("r"));
  Rect t{-1, -1, 0, 0};
  for (int n = 1; n <= 12; ++n) {
    Patch w = iterateWindow(chair, seed, n, t);
    CHECK(w.toLiteral(chair.alphabet()) == "gr/ry");
  }
}

TEST_CASE("zero iterations evaluate the seed directly") {
  auto table = loadRule("table");
  SeedConfig seed = SeedConfig::constant(table.alphabet().index("b"));
  Patch w = iterateWindow(table, seed, 0, Rect{-2, -2, 2, 2});
  for (const auto& [v, a] : w.cells()) {
    (void)v;
    CHECK(a == table.alphabet().index("b"));
  }
}

TEST_CASE("digit descent agrees with explicit repeated substitution") {
  auto table = loadRule("table");
  SeedConfig seed = SeedConfig::constant(table.alphabet().index("r"));
  Rect window{-4, -4, 3, 3};
  Patch byDescent = iterateWindow(table, seed, 3, window);
  Patch explicitSeed = patchOf(table, "rr/rr");  // the seed restricted to T
  Patch byExpansion = table.substitutePow(explicitSeed, 3).restrictedTo(window);
  CHECK(byDescent == byExpansion);
}

TEST_CASE("digit descent matches expansion for several seeds and depths") {
  auto chair = loadRule("chair");
  std::mt19937 rng(2024);
  TestingDomain domain = TestingDomain::defaultFor(chair);
  Rect base{-2, -2, 1, 1};
  for (int trial = 0; trial < 5; ++trial) {
    Patch seedPatch = testutil::randomPatch(rng, chair, base.cells());
    SeedConfig seed = SeedConfig::patchFill(seedPatch, (LetterIndex)0);
    for (int n = 1; n <= 4; ++n) {
      Rect window = chair.iterateSupportOfRect(n, base);
      Patch byExpansion = chair.substitutePow(seedPatch, n);
      Patch byDescent = iterateWindow(chair, seed, n, window);
      CHECK(byDescent == byExpansion);
    }
  }
}

TEST_CASE("digit descent handles the 3x3 block rule") {
  auto ex = loadRule("example45");
  std::mt19937 rng(63);
  Rect base{-2, -2, 1, 1};
  Patch seedPatch = testutil::randomPatch(rng, ex, base.cells());
  SeedConfig seed = SeedConfig::patchFill(seedPatch, (LetterIndex)0);
  for (int n = 1; n <= 3; ++n) {
    Rect window = ex.iterateSupportOfRect(n, base);
    CHECK(iterateWindow(ex, seed, n, window) == ex.substitutePow(seedPatch, n));
  }
}

TEST_CASE("window evaluations are consistent under restriction") {
  auto table = loadRule("table");
  SeedConfig seed = SeedConfig::periodic(
      parseSeedFile(table.alphabet(), testutil::readFile(std::string(FIXTURES_DIR) + "/rb.cell")));
  Rect big{-6, -5, 7, 6};
  Rect small{-2, -1, 3, 2};
  Patch onBig = iterateWindow(table, seed, 2, big);
  Patch onSmall = iterateWindow(table, seed, 2, small);
  CHECK(onBig.restrictedTo(small) == onSmall);
}

TEST_CASE("substitution is translation covariant") {
  auto table = loadRule("table");
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> shift(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    Patch p = testutil::randomPatch(rng, table, Rect{-1, -1, 1, 1}.cells());
    Vec2 gamma{shift(rng), shift(rng)};
    Patch lhs = table.substitute(p.translated(gamma));
    Patch rhs = table.substitute(p).translated(table.expand(gamma));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("support law: supp(S(P)) is the union of expanded cells") {
  auto chair = loadRule("chair");
  std::mt19937 rng(11);
  auto cells = Rect{-1, -1, 1, 1}.cells();
  // every support of size <= 6 drawn from a 3x3 neighborhood
  for (int mask = 1; mask < (1 << 9); ++mask) {
    if (__builtin_popcount(mask) > 6) continue;
    std::vector<Vec2> support;
    for (int i = 0; i < 9; ++i)
      if (mask & (1 << i)) support.push_back(cells[(size_t)i]);
    Patch p = testutil::randomPatch(rng, chair, support);
    Patch img = chair.substitute(p);
    std::set<std::pair<int, int>> expect;
    for (Vec2 m : support) {
      Vec2 base = chair.expand(m);
      for (int fy = 0; fy < chair.blockHeight(); ++fy)
        for (int fx = 0; fx < chair.blockWidth(); ++fx)
          expect.insert({base.x + fx, base.y + fy});
    }
    REQUIRE(img.size() == expect.size());
    for (const auto& [v, a] : img.cells()) {
      (void)a;
      CHECK(expect.count({v.x, v.y}) == 1);
    }
  }
}

TEST_CASE("primitivity exponents of the fixtures") {
  CHECK(loadRule("table").primitivityExponent() == 2);
  CHECK(loadRule("chair").primitivityExponent() == 2);
  SubstitutionRule one("one", Alphabet({"a"}), 2, 2, {{0, 0, 0, 0}});
  CHECK(one.primitivityExponent() == 1);
}

TEST_CASE("a non-primitive rule is reported as uncertified") {
  // two letters that never mix
  SubstitutionRule split("split", Alphabet({"a", "b"}), 2, 1, {{0, 0}, {1, 1}});
  CHECK_FALSE(split.primitivityExponent(8).has_value());
}

TEST_CASE("default testing domain is {-1,0}^2 and verifies condition (b)") {
  auto table = loadRule("table");
  TestingDomain domain = TestingDomain::defaultFor(table);
  REQUIRE(domain.size() == 4);
  // canonical order: top row first
  CHECK(domain.offsets()[0] == Vec2{-1, 0});
  CHECK(domain.offsets()[1] == Vec2{0, 0});
  CHECK(domain.offsets()[2] == Vec2{-1, -1});
  CHECK(domain.offsets()[3] == Vec2{0, -1});
}

TEST_CASE("degenerate block shapes are rejected by the testing domain") {
  SubstitutionRule flat("flat", Alphabet({"a", "b"}), 2, 1, {{0, 1}, {1, 0}});
  CHECK_THROWS_AS(TestingDomain::defaultFor(flat), ValidationError);
}

TEST_CASE("example45 testing domain also verifies for the 3x3 block") {
  auto ex = loadRule("example45");
  TestingDomain domain = TestingDomain::defaultFor(ex);
  CHECK(domain.size() == 4);
}

TEST_CASE("rb seed matches the paper's residue classes") {
  auto table = loadRule("table");
  auto cfg = parseSeedFile(table.alphabet(),
                           testutil::readFile(std::string(FIXTURES_DIR) + "/rb.cell"));
  auto name = [&](int x, int y) { return table.alphabet().name(cfg.letterAt({x, y})); };
  CHECK(name(0, 0) == "r");
  CHECK(name(1, 1) == "r");
  CHECK(name(0, 1) == "b");
  CHECK(name(1, 0) == "b");
  CHECK(name(-2, 4) == "r");
  CHECK(name(-1, 4) == "b");
}

TEST_CASE("patch literals round-trip and anchor on the testing domain") {
  auto table = loadRule("table");
  Patch p = patchOf(table, "yr/gr");
  CHECK(p.supportRect() == Rect{-1, -1, 0, 0});
  CHECK(p.toLiteral(table.alphabet()) == "yr/gr");
  Patch q = parsePatchLiteral(table.alphabet(), "y r / g r");
  CHECK(p == q);
}

TEST_CASE("translation equivalence is blind to position only") {
  auto table = loadRule("table");
  Patch p = patchOf(table, "yr/gr");
  CHECK(p.equivalentUpToTranslation(p.translated({7, -3})));
  CHECK_FALSE(p.equivalentUpToTranslation(patchOf(table, "yr/gg")));
  CHECK(p != p.translated({1, 0}));
}

TEST_CASE("translation equivalence is an equivalence relation") {
  auto table = loadRule("table");
  std::mt19937 rng(40);
  std::uniform_int_distribution<int> shift(-6, 6);
  for (int trial = 0; trial < 10; ++trial) {
    Patch a = testutil::randomPatch(rng, table, Rect{-1, -1, 1, 0}.cells());
    Patch b = a.translated({shift(rng), shift(rng)});
    Patch c = b.translated({shift(rng), shift(rng)});
    CHECK(a.equivalentUpToTranslation(a));                      // reflexive
    CHECK(b.equivalentUpToTranslation(a));                      // symmetric
    CHECK((a.equivalentUpToTranslation(b) &&                    // transitive
           b.equivalentUpToTranslation(c) && a.equivalentUpToTranslation(c)));
  }
}

TEST_CASE("testing domains can sit at other offsets; sparse ones cannot") {
  auto table = loadRule("table");
  std::vector<Vec2> shifted = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  TestingDomain custom(table, shifted);
  CHECK(custom.size() == 4);
  TSpace space(table, custom);
  Patch onShifted;
  for (Vec2 t : custom.offsets()) onShifted.set(t, table.alphabet().index("r"));
  CHECK(space.encode(onShifted) == space.encode(onShifted));

  std::vector<Vec2> sparse = {{0, 0}, {1, 1}};
  CHECK_THROWS_AS(TestingDomain(table, sparse), ValidationError);
}
