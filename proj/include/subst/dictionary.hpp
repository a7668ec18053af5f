#pragma once

// T-dictionaries: enumeration of legal T-patches, the set-level step map Phi,
// eventual periodicity of dictionary orbits, and finite-radius dictionaries
// of limit subshifts.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "subst/errors.hpp"
#include "subst/patch.hpp"
#include "subst/patch_set.hpp"
#include "subst/rule.hpp"
#include "subst/seed.hpp"
#include "subst/window.hpp"

namespace subst {

// All T-subpatches of `p`: every anchor gamma with gamma+T inside supp(p)
// contributes the normalized patch t -> p(gamma + t).
inline PatchSet tSubpatches(const TSpace& space, const Patch& p) {
  std::vector<TPatchCode> codes;
  if (p.empty()) return PatchSet{};
  Rect sup = p.supportRect();
  Rect tr = space.domain().boundingRect();
  bool dense = (long long)p.size() == sup.area();
  for (int ay = sup.y0 - tr.y0; ay <= sup.y1 - tr.y1; ++ay) {
    for (int ax = sup.x0 - tr.x0; ax <= sup.x1 - tr.x1; ++ax) {
      Vec2 anchor{ax, ay};
      if (!dense) {
        bool all = true;
        for (Vec2 t : space.domain().offsets())
          if (!p.contains(anchor + t)) {
            all = false;
            break;
          }
        if (!all) continue;
      }
      codes.push_back(space.encodeAt(p, anchor));
    }
  }
  return PatchSet(std::move(codes));
}

// One step of the set map Phi: all T-subpatches of S(P) over P in s.
inline PatchSet dictStep(const SubstitutionRule& rule, const TSpace& space, const PatchSet& s) {
  PatchSet out;
  for (TPatchCode c : s.codes()) {
    Patch img = rule.substitute(space.decode(c));
    out.unionWith(tSubpatches(space, img));
  }
  return out;
}

struct LegalSetResult {
  PatchSet set;
  bool primitiveCertified = false;  // rule certified primitive within the bound
  std::optional<int> primitivityK;
  int stabilizedAt = 0;  // iterate at which the cumulative union stopped growing
};

// Raised when the legal set fails to stabilize within the bound; carries the
// partial cumulative set for diagnosis.
class LegalSetUncertifiedError : public UncertifiedError {
 public:
  LegalSetUncertifiedError(const std::string& message, PatchSet partial)
      : UncertifiedError(message), partial_(std::move(partial)) {}
  const PatchSet& partialSet() const { return partial_; }

 private:
  PatchSet partial_;
};

// The set of S-legal T-patches: cumulative union of T-subpatches of S^n(a)
// over all letters a, certified complete once the union is unchanged for a
// step AND closed under one further substitution (dictStep(C) subset of C).
// Boundary patches of finite iterates make the explicit expansion necessary;
// the closure certificate is what makes the early stop sound. Iterate sizes
// grow geometrically, so a cell budget turns runaway growth into the
// uncertified error instead of memory exhaustion.
inline LegalSetResult legalTPatches(const SubstitutionRule& rule, const TSpace& space,
                                    int nMax = 16, long long cellBudget = 1ll << 24) {
  LegalSetResult result;
  auto k = rule.primitivityExponent();
  result.primitivityK = k;
  result.primitiveCertified = k.has_value();

  std::vector<Patch> iterates;
  for (int a = 0; a < rule.alphabet().size(); ++a)
    iterates.push_back(rule.letterPatch((LetterIndex)a));

  PatchSet cumulative;
  for (int n = 1; n <= nMax; ++n) {
    long long nextCells = (long long)iterates[0].size() * rule.blockWidth() *
                          rule.blockHeight() * rule.alphabet().size();
    if (nextCells > cellBudget)
      throw LegalSetUncertifiedError(
          "legal T-patch set not stabilized at iterate " + std::to_string(n) +
              " and further expansion exceeds the cell budget",
          std::move(cumulative));
    bool grew = false;
    for (auto& p : iterates) {
      p = rule.substitute(p);
      grew |= cumulative.unionWith(tSubpatches(space, p));
    }
    if (!grew && !cumulative.empty()) {
      if (dictStep(rule, space, cumulative).subsetOf(cumulative)) {
        result.set = std::move(cumulative);
        result.stabilizedAt = n;
        return result;
      }
    }
  }
  throw LegalSetUncertifiedError(
      "legal T-patch set did not stabilize within " + std::to_string(nMax) +
          " iterations (partial size " + std::to_string(cumulative.size()) + ")",
      std::move(cumulative));
}

struct DictionaryOrbit {
  std::vector<PatchSet> trajectory;  // P_0, P_1, ..., up to first repetition
  int preperiod = 0;                 // N_0
  int period = 1;                    // l_0
  std::vector<PatchSet> qsets;       // Q_j = W(S^{N_0*l_0+j}(omega_0))_T
};

// P_0 = W(omega_0)_T for a finite seed description.
inline PatchSet seedTPatches(const TSpace& space, const SeedConfig& seed) {
  const Rect tr = space.domain().boundingRect();
  if (seed.isConstant()) {
    Patch p;
    for (Vec2 t : space.domain().offsets()) p.set(t, seed.letterAt({0, 0}));
    return PatchSet({space.encode(p)});
  }
  if (seed.isPeriodic()) {
    // one period cell of anchors reads every T-patch of the configuration
    const auto& cfg = seed.periodicConfig();
    std::vector<TPatchCode> codes;
    for (int ay = 0; ay < cfg.p2; ++ay)
      for (int ax = 0; ax < cfg.p1; ++ax) {
        TPatchCode code = 0;
        for (Vec2 t : space.domain().offsets())
          code = code * space.letters() + cfg.letterAt(Vec2{ax, ay} + t);
        codes.push_back(code);
      }
    return PatchSet(std::move(codes));
  }
  // patch plus fill: scan the patch bounding box inflated by the T extent,
  // which includes every anchor whose T-translate meets the patch, plus at
  // least one all-fill placement.
  const auto& pf = seed.patchFill();
  Rect b = pf.patch.supportRect();
  Rect scan{b.x0 - tr.x1 - tr.width(), b.y0 - tr.y1 - tr.height(),
            b.x1 - tr.x0 + tr.width(), b.y1 - tr.y0 + tr.height()};
  std::vector<TPatchCode> codes;
  for (int ay = scan.y0; ay <= scan.y1; ++ay)
    for (int ax = scan.x0; ax <= scan.x1; ++ax) {
      TPatchCode code = 0;
      for (Vec2 t : space.domain().offsets())
        code = code * space.letters() + seed.letterAt(Vec2{ax, ay} + t);
      codes.push_back(code);
    }
  return PatchSet(std::move(codes));
}

// Runs the Phi-orbit from P_0 until a set repeats. The first repetition of a
// trajectory entry yields the minimal preperiod N_0 and period l_0.
inline DictionaryOrbit dictionaryOrbit(const SubstitutionRule& rule, const TSpace& space,
                                       const SeedConfig& seed, int nMax = 64) {
  if (nMax < 1) throw ValidationError("dictionary orbit bound must be at least 1");
  DictionaryOrbit orbit;
  std::map<std::vector<TPatchCode>, int> seen;
  orbit.trajectory.push_back(seedTPatches(space, seed));
  seen.emplace(orbit.trajectory.back().codes(), 0);
  for (int n = 1; n <= nMax; ++n) {
    PatchSet next = dictStep(rule, space, orbit.trajectory.back());
    auto [it, inserted] = seen.emplace(next.codes(), n);
    orbit.trajectory.push_back(std::move(next));
    if (!inserted) {
      orbit.preperiod = it->second;
      orbit.period = n - it->second;
      // Q_j = P_{N0*l0 + j}, reduced into the recorded periodic segment.
      for (int j = 0; j < orbit.period; ++j) {
        long long idx = (long long)orbit.preperiod * orbit.period + j;
        int reduced = orbit.preperiod + (int)((idx - orbit.preperiod) % orbit.period);
        orbit.qsets.push_back(orbit.trajectory[(size_t)reduced]);
      }
      return orbit;
    }
  }
  throw UncertifiedError("dictionary orbit did not repeat within " + std::to_string(nMax) +
                         " steps (repetition is guaranteed only within 2^(|A|^|T|) steps)");
}

// Finite-radius dictionary W(q, ell)_{B(r)} for a set q closed under the
// ell-fold step map. The covering exponent makes the single-level expansion
// exact (stabilization of ball dictionaries).
inline std::vector<Patch> limitDictionary(const SubstitutionRule& rule, const TSpace& space,
                                          const PatchSet& q, int ell, int radius) {
  if (q.empty()) throw ValidationError("limit dictionary requires a nonempty patch set");
  if (ell < 1) throw ValidationError("period must be at least 1");
  PatchSet stepped = q;
  for (int i = 0; i < ell; ++i) stepped = dictStep(rule, space, stepped);
  if (!(stepped == q)) {
    PatchSet diff = stepped.minus(q);
    PatchSet diff2 = q.minus(stepped);
    TPatchCode witness = !diff.empty() ? diff.codes()[0] : diff2.codes()[0];
    throw ValidationError("patch set is not closed under the " + std::to_string(ell) +
                          "-fold dictionary step; violating patch " +
                          space.literal(rule.alphabet(), witness));
  }

  int cover = space.domain().coveringExponent(rule, radius);
  int iters = ((cover + ell - 1) / ell) * ell;  // smallest multiple of ell
  std::set<Patch> out;
  for (TPatchCode c : q.codes()) {
    Patch img = rule.substitutePow(space.decode(c), iters);
    Rect sup = img.supportRect();
    for (int ay = sup.y0 + radius; ay + radius <= sup.y1; ++ay)
      for (int ax = sup.x0 + radius; ax + radius <= sup.x1; ++ax) {
        Patch sub;
        for (int y = -radius; y <= radius; ++y)
          for (int x = -radius; x <= radius; ++x)
            sub.set({x, y}, img.at({ax + x, ay + y}));
        out.insert(std::move(sub));
      }
  }
  return std::vector<Patch>(out.begin(), out.end());
}

enum class Verdict { Converges, DivergesWithDefects, Unknown };

inline std::string verdictName(Verdict v) {
  switch (v) {
    case Verdict::Converges: return "converges";
    case Verdict::DivergesWithDefects: return "diverges-with-defects";
    default: return "unknown";
  }
}

struct ConvergenceReport {
  Verdict verdict = Verdict::Unknown;
  std::vector<TPatchCode> defects;  // illegal patches witnessing divergence
  std::optional<int> period;        // l_0 when the orbit was computed
  std::string reason;
};

// Convergence of Orb(S^n(omega_0)) toward Omega(S). Legal seed dictionaries
// are sufficient for convergence; for T-bijective rules they are also
// necessary, so an illegal seed patch settles the question without running
// the orbit. Otherwise the orbit's limit sets decide.
inline ConvergenceReport convergenceVerdict(const SubstitutionRule& rule, const TSpace& space,
                                            const SeedConfig& seed, const PatchSet& legal,
                                            bool ruleIsTBijective, int nMax = 64) {
  ConvergenceReport report;
  PatchSet p0 = seedTPatches(space, seed);
  if (p0.subsetOf(legal)) {
    report.verdict = Verdict::Converges;
    report.reason = "all seed T-patches are legal";
    return report;
  }
  if (ruleIsTBijective) {
    report.verdict = Verdict::DivergesWithDefects;
    report.defects = p0.minus(legal).codes();
    report.reason = "T-bijective rule with an illegal seed T-patch";
    return report;
  }
  DictionaryOrbit orbit = dictionaryOrbit(rule, space, seed, nMax);
  report.period = orbit.period;
  PatchSet defects;
  for (const auto& qj : orbit.qsets) defects.unionWith(qj.minus(legal));
  if (defects.empty()) {
    report.verdict = Verdict::Converges;
    report.reason = "all limit dictionary sets are legal";
  } else {
    report.verdict = Verdict::DivergesWithDefects;
    report.defects = defects.codes();
    report.reason = "limit dictionary sets contain illegal patches";
  }
  return report;
}

}  // namespace subst
