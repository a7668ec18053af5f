#pragma once

// Per-position letter graphs G_t, their tensor product on A^T, and the
// classification machinery built on it: cycle structure, T-bijectivity,
// purely-T-illegal certificates, and limit-point bounds.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subst/dictionary.hpp"
#include "subst/errors.hpp"
#include "subst/patch_set.hpp"
#include "subst/rule.hpp"

namespace subst {

// Functional graph on letters for one position t in T:
// next[a] = S0(a)(f_t) where t = D(eta_t) + f_t.
struct LetterGraph {
  Vec2 t;
  Vec2 eta;                        // source position in T whose letter feeds t
  Vec2 f;                          // block coordinate read from the rule
  std::vector<LetterIndex> next;   // out-degree one per vertex
};

inline std::vector<LetterGraph> letterGraphs(const SubstitutionRule& rule, const TSpace& space) {
  std::vector<LetterGraph> out;
  for (Vec2 t : space.domain().offsets()) {
    auto [eta, f] = rule.splitDigit(t);
    if (space.domain().indexOf(eta) < 0)
      throw ValidationError("testing domain is not closed under digit descent");
    LetterGraph g{t, eta, f, {}};
    g.next.resize((size_t)rule.alphabet().size());
    for (int a = 0; a < rule.alphabet().size(); ++a)
      g.next[(size_t)a] = rule.image((LetterIndex)a, f);
    out.push_back(std::move(g));
  }
  return out;
}

// The map Psi(P) = S(P)|_T on T-patch codes. Precomputed position tables make
// this pure integer arithmetic; used for graph walks over all of A^T.
class PsiMap {
 public:
  PsiMap(const SubstitutionRule& rule, const TSpace& space) : space_(&space) {
    graphs_ = letterGraphs(rule, space);
    int k = space.domain().size();
    srcIndex_.resize((size_t)k);
    for (int i = 0; i < k; ++i) {
      srcIndex_[(size_t)i] = space.domain().indexOf(graphs_[(size_t)i].eta);
    }
    // big-endian place values for digit extraction
    place_.assign((size_t)k, 1);
    for (int i = k - 2; i >= 0; --i) place_[(size_t)i] = place_[(size_t)i + 1] * space.letters();
  }

  TPatchCode operator()(TPatchCode code) const {
    int k = (int)place_.size();
    TPatchCode out = 0;
    for (int i = 0; i < k; ++i) {
      LetterIndex src = (LetterIndex)((code / place_[(size_t)srcIndex_[(size_t)i]]) %
                                      (TPatchCode)space_->letters());
      out = out * (TPatchCode)space_->letters() + graphs_[(size_t)i].next[src];
    }
    return out;
  }

  const std::vector<LetterGraph>& factors() const { return graphs_; }

 private:
  const TSpace* space_;
  std::vector<LetterGraph> graphs_;
  std::vector<int> srcIndex_;
  std::vector<TPatchCode> place_;
};

// Psi on explicit patches; the support must equal T.
inline Patch psi(const SubstitutionRule& rule, const TSpace& space, const Patch& p) {
  TPatchCode code = space.encode(p);  // validates the support
  PsiMap m(rule, space);
  return space.decode(m(code));
}

struct CycleInfo {
  int length = 0;
  TPatchCode representative = 0;  // smallest code on the cycle
  int count = 0;                  // number of cycles of this length
};

struct TPatchGraph {
  std::vector<LetterGraph> factors;
  TPatchCode vertexCount = 0;
  std::vector<CycleInfo> cycles;  // grouped by length, ascending
  long long lcmL = 1;
  bool totallyCyclic = false;
  std::vector<std::uint8_t> onCycle;  // indexed by code
};

// Functional-graph cycle analysis by iterative successor walking with a
// three-color visitation state; the tensor graph is never materialized.
inline TPatchGraph buildTPatchGraph(const SubstitutionRule& rule, const TSpace& space,
                                    TPatchCode vertexBudget = 1'000'000) {
  TPatchGraph g;
  g.factors = letterGraphs(rule, space);
  g.vertexCount = space.count();
  if (g.vertexCount > vertexBudget)
    throw BudgetError("T-patch graph has " + std::to_string(g.vertexCount) +
                      " vertices, over the enumeration budget of " +
                      std::to_string(vertexBudget) + "; analyze the factor graphs instead");

  PsiMap next(rule, space);
  const TPatchCode n = g.vertexCount;
  std::vector<std::uint8_t> color(n, 0);  // 0 unvisited, 1 in progress, 2 finished
  g.onCycle.assign(n, 0);
  std::map<int, std::pair<int, TPatchCode>> byLength;  // length -> (count, min representative)

  std::vector<TPatchCode> path;
  for (TPatchCode start = 0; start < n; ++start) {
    if (color[start] != 0) continue;
    path.clear();
    TPatchCode v = start;
    while (color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = next(v);
    }
    if (color[v] == 1) {
      // new cycle: the suffix of the path starting at v
      auto it = std::find(path.begin(), path.end(), v);
      int len = (int)(path.end() - it);
      TPatchCode rep = *std::min_element(it, path.end());
      for (auto c = it; c != path.end(); ++c) g.onCycle[*c] = 1;
      auto [entry, inserted] = byLength.emplace(len, std::make_pair(1, rep));
      if (!inserted) {
        entry->second.first += 1;
        entry->second.second = std::min(entry->second.second, rep);
      }
    }
    for (TPatchCode c : path) color[c] = 2;
  }

  g.totallyCyclic = true;
  for (TPatchCode v = 0; v < n; ++v)
    if (!g.onCycle[v]) {
      g.totallyCyclic = false;
      break;
    }

  long long lcm = 1;
  for (const auto& [len, info] : byLength) {
    g.cycles.push_back(CycleInfo{len, info.second, info.first});
    long long gcd = std::gcd(lcm, (long long)len);
    unsigned __int128 next128 = (unsigned __int128)(lcm / gcd) * (unsigned __int128)len;
    if (next128 > (unsigned __int128)(1ll << 62))
      throw NumericError("lcm of cycle lengths overflows");
    lcm = (long long)next128;
  }
  g.lcmL = lcm;
  return g;
}

struct BijectivityReport {
  bool bijective = false;
  // witness collision (two distinct patches with the same Psi image)
  std::optional<std::pair<TPatchCode, TPatchCode>> collision;
};

inline BijectivityReport isTBijective(const SubstitutionRule& rule, const TSpace& space,
                                      TPatchCode vertexBudget = 1'000'000) {
  if (space.count() > vertexBudget)
    throw BudgetError("bijectivity enumeration over the budget; use componentwise analysis");
  PsiMap next(rule, space);
  const TPatchCode n = space.count();
  std::vector<TPatchCode> preimage(n, n);  // n = none
  for (TPatchCode v = 0; v < n; ++v) {
    TPatchCode img = next(v);
    if (preimage[img] != n) return BijectivityReport{false, std::make_pair(preimage[img], v)};
    preimage[img] = v;
  }
  return BijectivityReport{true, std::nullopt};
}

// Whether a -> S0(a)(x) permutes the alphabet, for each block position x.
// All-true is a sufficient condition for T-bijectivity. Positions are listed
// in block order x + w*y.
inline std::vector<bool> componentwiseBijectivity(const SubstitutionRule& rule) {
  std::vector<bool> out;
  int n = rule.alphabet().size();
  for (int fy = 0; fy < rule.blockHeight(); ++fy)
    for (int fx = 0; fx < rule.blockWidth(); ++fx) {
      std::vector<bool> hit(n, false);
      bool ok = true;
      for (int a = 0; a < n && ok; ++a) {
        LetterIndex b = rule.image((LetterIndex)a, {fx, fy});
        if (hit[b]) ok = false;
        hit[b] = true;
      }
      out.push_back(ok);
    }
  return out;
}

// Per-domino record of the purely-T-illegal certificate. `certifiedAt` is the
// first iterate whose T-subpatch set is entirely legal; it stays legal from
// then on because the legal set is closed under the dictionary step.
struct DominoCertificate {
  Patch domino;
  std::optional<int> certifiedAt;
  std::vector<TPatchCode> persistentIllegal;  // nonempty when certification fails
  int iterationsExamined = 0;
};

struct PureTIllegalReport {
  std::optional<int> m0;
  std::vector<DominoCertificate> dominoes;
};

// Domino-reduction certificate for pure T-illegality: off-center T-subpatches
// of S^n(P) live in coordinate half-planes, which the four domino subsets of
// T eventually cover, so it suffices that every 2x1 and 1x2 patch has all its
// iterated T-subpatches legal. m0 is the largest per-domino certificate.
// When a domino's subpatch sets cycle without ever becoming legal, that
// domino's persistent illegal patches are reported and m0 is absent.
inline PureTIllegalReport isPurelyTIllegal(const SubstitutionRule& rule, const TSpace& space,
                                           const PatchSet& legal, int nMax = 64) {
  PureTIllegalReport report;
  bool allCertified = true;
  int m0 = 1;

  std::vector<Patch> dominoes;
  int n = rule.alphabet().size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Patch hor;  // horizontal 2x1
      hor.set({0, 0}, (LetterIndex)a);
      hor.set({1, 0}, (LetterIndex)b);
      dominoes.push_back(hor);
      Patch ver;  // vertical 1x2
      ver.set({0, 0}, (LetterIndex)a);
      ver.set({0, 1}, (LetterIndex)b);
      dominoes.push_back(ver);
    }

  for (const Patch& d : dominoes) {
    DominoCertificate cert;
    cert.domino = d;
    // W_1 by explicit expansion; thereafter W_{m+1} = Phi(W_m) is exact since
    // the supports are rectangles with both dimensions at least 2.
    PatchSet w = tSubpatches(space, rule.substitute(d));
    std::map<std::vector<TPatchCode>, int> seen;
    for (int m = 1; m <= nMax; ++m) {
      cert.iterationsExamined = m;
      if (w.subsetOf(legal)) {
        cert.certifiedAt = m;
        break;
      }
      auto [it, inserted] = seen.emplace(w.codes(), m);
      if (!inserted) {
        cert.persistentIllegal = w.minus(legal).codes();
        break;
      }
      w = dictStep(rule, space, w);
    }
    if (!cert.certifiedAt && cert.persistentIllegal.empty())
      throw UncertifiedError("domino certificate did not stabilize within " +
                             std::to_string(nMax) + " iterations");
    if (cert.certifiedAt)
      m0 = std::max(m0, *cert.certifiedAt);
    else
      allCertified = false;
    report.dominoes.push_back(std::move(cert));
  }

  if (allCertified) report.m0 = m0;
  return report;
}

struct LimitPointBound {
  long long value = 1;
  bool sharp = false;
  long long lcmL = 1;
  std::string basis;
};

// Upper bound on the number of limit points of iterated subshifts. Sharp
// (= lcm of cycle lengths) for primitive purely-T-illegal rules; otherwise
// the bound is the ceiling observed over constant-letter seed orbits and is
// reported as non-sharp.
inline LimitPointBound limitPointBound(const SubstitutionRule& rule, const TSpace& space,
                                       const TPatchGraph& graph,
                                       const PureTIllegalReport& pure, bool primitive) {
  LimitPointBound out;
  out.lcmL = graph.lcmL;
  if (pure.m0 && primitive) {
    out.value = graph.lcmL;
    out.sharp = true;
    out.basis = "lcm of cycle lengths (purely T-illegal, primitive)";
    return out;
  }
  long long observed = 1;
  for (int a = 0; a < rule.alphabet().size(); ++a) {
    DictionaryOrbit orbit = dictionaryOrbit(rule, space, SeedConfig::constant((LetterIndex)a));
    observed = std::max(observed, (long long)orbit.period);
  }
  out.value = std::max(graph.lcmL, observed);
  out.sharp = false;
  out.basis = "ceiling of observed dictionary periods over constant seeds (non-sharp)";
  return out;
}

// DOT rendering of the factor graphs plus a cycle summary of the product.
inline std::string toDot(const SubstitutionRule& rule, const TPatchGraph& g) {
  std::string out;
  for (const auto& factor : g.factors) {
    out += "digraph \"G_t(" + std::to_string(factor.t.x) + "," + std::to_string(factor.t.y) +
           ")\" {\n";
    for (int a = 0; a < rule.alphabet().size(); ++a)
      out += "  " + rule.alphabet().name((LetterIndex)a) + " -> " +
             rule.alphabet().name(factor.next[(size_t)a]) + ";\n";
    out += "}\n";
  }
  out += "// tensor product on " + std::to_string(g.vertexCount) + " vertices; " +
         (g.totallyCyclic ? "totally cyclic" : "not totally cyclic") +
         "; lcm of cycle lengths L = " + std::to_string(g.lcmL) + "\n";
  for (const auto& c : g.cycles)
    out += "// cycles of length " + std::to_string(c.length) + ": " + std::to_string(c.count) +
           "\n";
  return out;
}

}  // namespace subst
