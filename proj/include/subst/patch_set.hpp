#pragma once

// Compact codes for T-patches and deterministic sets of them. A T-patch is
// encoded big-endian over the canonical offset order, so integer order on
// codes is lexicographic order on letter indices (top row first).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "subst/alphabet.hpp"
#include "subst/errors.hpp"
#include "subst/patch.hpp"
#include "subst/rule.hpp"
#include "subst/testing_domain.hpp"

namespace subst {

using TPatchCode = std::uint64_t;

// Encoding context: a testing domain plus the alphabet size.
class TSpace {
 public:
  TSpace(const SubstitutionRule& rule, TestingDomain domain)
      : domain_(std::move(domain)), nLetters_(rule.alphabet().size()) {
    double bits = (double)domain_.size() * std::log2((double)std::max(nLetters_, 2));
    if (bits > 62)
      throw BudgetError("alphabet^|T| does not fit in a 64-bit code space");
    count_ = 1;
    for (int i = 0; i < domain_.size(); ++i) count_ *= (TPatchCode)nLetters_;
  }

  const TestingDomain& domain() const { return domain_; }
  int letters() const { return nLetters_; }
  TPatchCode count() const { return count_; }  // |A|^|T|

  // Reads the T-patch of `p` anchored at `anchor` (cells anchor+t, t in T).
  TPatchCode encodeAt(const Patch& p, Vec2 anchor) const {
    TPatchCode code = 0;
    for (Vec2 t : domain_.offsets()) code = code * nLetters_ + p.at(anchor + t);
    return code;
  }

  TPatchCode encode(const Patch& p) const {
    if ((int)p.size() != domain_.size())
      throw ValidationError("patch support does not equal the testing domain");
    for (Vec2 t : domain_.offsets())
      if (!p.contains(t)) throw ValidationError("patch support does not equal the testing domain");
    return encodeAt(p, {0, 0});
  }

  Patch decode(TPatchCode code) const {
    const auto& off = domain_.offsets();
    Patch p;
    for (int i = (int)off.size() - 1; i >= 0; --i) {
      p.set(off[i], (LetterIndex)(code % nLetters_));
      code /= nLetters_;
    }
    return p;
  }

  std::vector<LetterIndex> decodeLetters(TPatchCode code) const {
    std::vector<LetterIndex> out(domain_.offsets().size());
    for (int i = (int)out.size() - 1; i >= 0; --i) {
      out[i] = (LetterIndex)(code % nLetters_);
      code /= nLetters_;
    }
    return out;
  }

  std::string literal(const Alphabet& alphabet, TPatchCode code) const {
    return decode(code).toLiteral(alphabet);
  }

 private:
  TestingDomain domain_;
  int nLetters_;
  TPatchCode count_;
};

// Set of T-patches: sorted unique codes, deterministic iteration.
class PatchSet {
 public:
  PatchSet() = default;
  explicit PatchSet(std::vector<TPatchCode> codes) : codes_(std::move(codes)) { normalize(); }

  bool empty() const { return codes_.empty(); }
  size_t size() const { return codes_.size(); }
  const std::vector<TPatchCode>& codes() const { return codes_; }

  bool contains(TPatchCode c) const {
    return std::binary_search(codes_.begin(), codes_.end(), c);
  }

  void insert(TPatchCode c) {
    auto it = std::lower_bound(codes_.begin(), codes_.end(), c);
    if (it == codes_.end() || *it != c) codes_.insert(it, c);
  }

  // Returns true when anything was added.
  bool unionWith(const PatchSet& other) {
    size_t before = codes_.size();
    std::vector<TPatchCode> merged;
    merged.reserve(codes_.size() + other.codes_.size());
    std::set_union(codes_.begin(), codes_.end(), other.codes_.begin(), other.codes_.end(),
                   std::back_inserter(merged));
    codes_ = std::move(merged);
    return codes_.size() != before;
  }

  PatchSet minus(const PatchSet& other) const {
    std::vector<TPatchCode> out;
    std::set_difference(codes_.begin(), codes_.end(), other.codes_.begin(), other.codes_.end(),
                        std::back_inserter(out));
    return PatchSet(std::move(out));
  }

  bool subsetOf(const PatchSet& other) const {
    return std::includes(other.codes_.begin(), other.codes_.end(), codes_.begin(), codes_.end());
  }

  friend bool operator==(const PatchSet& a, const PatchSet& b) { return a.codes_ == b.codes_; }
  friend bool operator!=(const PatchSet& a, const PatchSet& b) { return !(a == b); }

  std::vector<std::string> literals(const TSpace& space, const Alphabet& alphabet) const {
    std::vector<std::string> out;
    out.reserve(codes_.size());
    for (TPatchCode c : codes_) out.push_back(space.literal(alphabet, c));
    return out;
  }

 private:
  void normalize() {
    std::sort(codes_.begin(), codes_.end());
    codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
  }

  std::vector<TPatchCode> codes_;
};

}  // namespace subst
