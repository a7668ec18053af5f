#pragma once

// Unions of disjoint closed intervals: the representation used for spectrum
// approximations. Construction merges overlapping or tolerance-close
// intervals; Hausdorff distance and Lebesgue measures are computed exactly
// from endpoints.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "subst/errors.hpp"

namespace subst {

class IntervalUnion {
 public:
  using Interval = std::pair<double, double>;

  IntervalUnion() = default;

  // Merges with the given tolerance: intervals closer than mergeTol are
  // coalesced. Invalid intervals (hi < lo) are rejected.
  explicit IntervalUnion(std::vector<Interval> intervals, double mergeTol = 0.0) {
    for (const auto& [lo, hi] : intervals)
      if (!(lo <= hi)) throw ValidationError("interval with lo > hi");
    std::sort(intervals.begin(), intervals.end());
    for (const auto& iv : intervals) {
      if (!intervals_.empty() && iv.first <= intervals_.back().second + mergeTol)
        intervals_.back().second = std::max(intervals_.back().second, iv.second);
      else
        intervals_.push_back(iv);
    }
  }

  static IntervalUnion single(double lo, double hi) { return IntervalUnion({{lo, hi}}); }

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  size_t count() const { return intervals_.size(); }

  double measure() const {
    double m = 0;
    for (const auto& [lo, hi] : intervals_) m += hi - lo;
    return m;
  }

  double min() const {
    if (empty()) throw ValidationError("empty interval union has no minimum");
    return intervals_.front().first;
  }
  double max() const {
    if (empty()) throw ValidationError("empty interval union has no maximum");
    return intervals_.back().second;
  }

  bool contains(double x, double tol = 0.0) const {
    for (const auto& [lo, hi] : intervals_)
      if (x >= lo - tol && x <= hi + tol) return true;
    return false;
  }

  // Distance from a point to the union.
  double distanceTo(double x) const {
    if (empty()) throw ValidationError("distance to empty interval union");
    double best = std::abs(x - intervals_[0].first);
    for (const auto& [lo, hi] : intervals_) {
      if (x >= lo && x <= hi) return 0.0;
      best = std::min(best, std::min(std::abs(x - lo), std::abs(x - hi)));
    }
    return best;
  }

  friend bool operator==(const IntervalUnion& a, const IntervalUnion& b) {
    return a.intervals_ == b.intervals_;
  }

 private:
  std::vector<Interval> intervals_;
};

// sup over a in A of dist(a, B). The point-to-union distance is piecewise
// linear on each interval of A, so the supremum is attained at an interval
// endpoint of A or at a gap midpoint of B clamped into A.
inline double directedHausdorff(const IntervalUnion& a, const IntervalUnion& b) {
  if (a.empty() || b.empty())
    throw ValidationError("Hausdorff distance requires nonempty interval unions");
  std::vector<double> candidates;
  for (const auto& [lo, hi] : a.intervals()) {
    candidates.push_back(lo);
    candidates.push_back(hi);
  }
  const auto& bi = b.intervals();
  for (size_t i = 0; i + 1 < bi.size(); ++i) {
    double mid = 0.5 * (bi[i].second + bi[i + 1].first);
    if (a.contains(mid)) candidates.push_back(mid);
  }
  double best = 0;
  for (double x : candidates) best = std::max(best, b.distanceTo(x));
  return best;
}

inline double hausdorffDistance(const IntervalUnion& a, const IntervalUnion& b) {
  return std::max(directedHausdorff(a, b), directedHausdorff(b, a));
}

struct LebesgueMeasures {
  double measA = 0;
  double measB = 0;
  double measAminusB = 0;
  double measSymmDiff = 0;
};

// Exact endpoint-sweep measures of A, B, A\B, and the symmetric difference.
inline LebesgueMeasures lebesgueMeasures(const IntervalUnion& a, const IntervalUnion& b) {
  LebesgueMeasures out;
  out.measA = a.measure();
  out.measB = b.measure();
  std::vector<double> cuts;
  for (const auto& [lo, hi] : a.intervals()) {
    cuts.push_back(lo);
    cuts.push_back(hi);
  }
  for (const auto& [lo, hi] : b.intervals()) {
    cuts.push_back(lo);
    cuts.push_back(hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double len = cuts[i + 1] - cuts[i];
    if (len <= 0) continue;
    double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    bool inA = a.contains(mid), inB = b.contains(mid);
    if (inA && !inB) out.measAminusB += len;
    if (inA != inB) out.measSymmDiff += len;
  }
  return out;
}

// Band CSV format: header "band_index,lo,hi", one row per interval, floats
// with 12 significant digits.
inline std::string formatDouble12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string bandsCsv(const IntervalUnion& u) {
  std::string out = "band_index,lo,hi\n";
  int i = 0;
  for (const auto& [lo, hi] : u.intervals())
    out += std::to_string(i++) + "," + formatDouble12(lo) + "," + formatDouble12(hi) + "\n";
  return out;
}

inline IntervalUnion parseBandsCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<IntervalUnion::Interval> intervals;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    if (lineNo == 1) {
      if (line != "band_index,lo,hi")
        throw ValidationError("bands CSV must start with header 'band_index,lo,hi'");
      continue;
    }
    std::istringstream ls(line);
    std::string idx, lo, hi;
    if (!std::getline(ls, idx, ',') || !std::getline(ls, lo, ',') || !std::getline(ls, hi))
      throw ValidationError("bands CSV line " + std::to_string(lineNo) + ": expected 3 columns");
    try {
      intervals.emplace_back(std::stod(lo), std::stod(hi));
    } catch (const std::exception&) {
      throw ValidationError("bands CSV line " + std::to_string(lineNo) + ": bad number");
    }
  }
  return IntervalUnion(std::move(intervals));
}

inline IntervalUnion readBandsCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open bands file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parseBandsCsv(buf.str());
}

}  // namespace subst
