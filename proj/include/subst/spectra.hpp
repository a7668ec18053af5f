#pragma once

// Schroedinger operators on l^2(Z^2) with nearest-neighbor hopping 1 and a
// pattern-equivariant potential: Floquet-Bloch spectra of periodic
// configurations, dense box truncations of window configurations, and the
// closed-form oracle for the single-line defect.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "subst/errors.hpp"
#include "subst/interval_union.hpp"
#include "subst/parallel.hpp"
#include "subst/patch_set.hpp"
#include "subst/rule.hpp"
#include "subst/seed.hpp"
#include "subst/tpatch_graph.hpp"

namespace subst {

constexpr double kBandMergeTol = 1e-6;
constexpr double kRefineTol = 1e-3;
constexpr int kMaxKGrid = 512;

// On-site potential. SingleLetter reads the letter under the site;
// IllegalIndicator puts weight lambda0 * scale on sites whose anchored
// T-patch is outside the reference set.
class Potential {
 public:
  static Potential singleLetter(std::vector<double> values) {
    for (double v : values)
      if (!std::isfinite(v)) throw ValidationError("single-letter potential must be finite");
    Potential p;
    p.values_ = std::move(values);
    return p;
  }

  static Potential illegalIndicator(double lambda0, PatchSet reference, int scale = 1) {
    if (!std::isfinite(lambda0)) throw ValidationError("indicator strength must be finite");
    if (scale != 1 && scale != 2) throw ValidationError("indicator scale must be 1 or 2");
    Potential p;
    p.lambda0_ = lambda0;
    p.scale_ = scale;
    p.reference_ = std::move(reference);
    return p;
  }

  bool isIndicator() const { return lambda0_.has_value(); }
  double lambda0() const { return *lambda0_; }
  int scale() const { return scale_; }

  // Evaluate at a site, reading the configuration through `letterAt`.
  // Indicator potentials additionally need the testing domain.
  double at(const std::function<LetterIndex(Vec2)>& letterAt, const TSpace* space,
            Vec2 site) const {
    if (!isIndicator()) {
      LetterIndex a = letterAt(site);
      if (a >= values_.size()) throw ValidationError("potential letter outside value table");
      return values_[a];
    }
    if (!space) throw ValidationError("indicator potential requires a testing domain");
    TPatchCode code = 0;
    for (Vec2 t : space->domain().offsets())
      code = code * space->letters() + letterAt(site + t);
    return reference_.contains(code) ? 0.0 : *lambda0_ * scale_;
  }

  double minValue() const {
    if (isIndicator()) return std::min(0.0, *lambda0_ * scale_);
    double m = values_[0];
    for (double v : values_) m = std::min(m, v);
    return m;
  }
  double maxValue() const {
    if (isIndicator()) return std::max(0.0, *lambda0_ * scale_);
    double m = values_[0];
    for (double v : values_) m = std::max(m, v);
    return m;
  }

 private:
  Potential() = default;
  std::vector<double> values_;
  std::optional<double> lambda0_;
  int scale_ = 1;
  PatchSet reference_;
};

struct BlochMatrix {
  int p1 = 1;
  int p2 = 1;
  Eigen::MatrixXcd H;
  double k1 = 0;
  double k2 = 0;
};

// Bloch matrix of the periodic configuration at quasimomentum k in [0,2pi)^2.
// Sites are indexed x + p1*y; hops that wrap the cell pick up the phase
// exp(i k.w) with w the integer winding vector, so the diagonal carries
// exactly the potential whenever both periods exceed 1.
inline BlochMatrix blochHamiltonian(const PeriodicConfig& cfg, const Potential& pot,
                                    const TSpace* space, double k1, double k2) {
  BlochMatrix out;
  out.p1 = cfg.p1;
  out.p2 = cfg.p2;
  out.k1 = k1;
  out.k2 = k2;
  long long dim = cfg.sites();
  out.H = Eigen::MatrixXcd::Zero(dim, dim);
  auto letterAt = [&cfg](Vec2 v) { return cfg.letterAt(v); };
  const std::complex<double> I(0, 1);

  for (int y = 0; y < cfg.p2; ++y) {
    for (int x = 0; x < cfg.p1; ++x) {
      long long s = x + (long long)cfg.p1 * y;
      out.H((Eigen::Index)s, (Eigen::Index)s) += pot.at(letterAt, space, {x, y});
      const Vec2 dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (Vec2 d : dirs) {
        int tx = x + d.x, ty = y + d.y;
        int wx = floor_div(tx, cfg.p1), wy = floor_div(ty, cfg.p2);
        tx -= wx * cfg.p1;
        ty -= wy * cfg.p2;
        long long t = tx + (long long)cfg.p1 * ty;
        out.H((Eigen::Index)s, (Eigen::Index)t) += std::exp(I * (k1 * wx + k2 * wy));
      }
    }
  }
  return out;
}

struct SpectrumResult {
  IntervalUnion spectrum;
  std::vector<std::pair<double, double>> bands;  // per band index, before merging
  int grid = 0;
  bool converged = true;  // refinement reached the tolerance within the grid cap
};

namespace detail {

// Sweeps the k-grid and folds each point's sorted eigenvalues into per-band
// extremes on the fly. Min/max folding is order independent, so the result
// is deterministic under any scheduling, and memory stays O(dim).
inline SpectrumResult sweepBands(const PeriodicConfig& cfg, const Potential& pot,
                                 const TSpace* space, int gridN) {
  SpectrumResult out;
  out.grid = gridN;
  const size_t dim = (size_t)cfg.sites();
  out.bands.assign(dim, {std::numeric_limits<double>::infinity(),
                         -std::numeric_limits<double>::infinity()});
  std::mutex merge;
  const double step = 2.0 * M_PI / gridN;
  parallelFor((size_t)gridN * gridN, [&](size_t idx) {
    int a = (int)(idx % (size_t)gridN);
    int b = (int)(idx / (size_t)gridN);
    BlochMatrix bm = blochHamiltonian(cfg, pot, space, a * step, b * step);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(bm.H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw NumericError("eigensolver failed at k = (" + std::to_string(a * step) + "," +
                         std::to_string(b * step) + ")");
    std::lock_guard<std::mutex> lock(merge);
    for (size_t j = 0; j < dim; ++j) {
      out.bands[j].first = std::min(out.bands[j].first, es.eigenvalues()((Eigen::Index)j));
      out.bands[j].second = std::max(out.bands[j].second, es.eigenvalues()((Eigen::Index)j));
    }
  });
  out.spectrum = IntervalUnion(out.bands, kBandMergeTol);
  return out;
}

}  // namespace detail

// Floquet-Bloch spectrum: eigenvalues over a uniform k-grid, band j spanning
// [min_k lambda_j, max_k lambda_j] (valid since each lambda_j is continuous
// on the torus), bands merged into an interval union. With refine, the grid
// doubles until the Hausdorff change drops below kRefineTol or the grid cap
// is reached; an unconverged result is flagged, never silently accepted.
inline SpectrumResult spectrumPeriodic(const PeriodicConfig& cfg, const Potential& pot,
                                       const TSpace* space, int gridN, bool refine = false) {
  if (gridN < 4) throw ValidationError("k-grid must be at least 4");
  SpectrumResult cur = detail::sweepBands(cfg, pot, space, gridN);
  if (!refine) return cur;
  while (cur.grid < kMaxKGrid) {
    int nextGrid = cur.grid * 2;
    SpectrumResult next = detail::sweepBands(cfg, pot, space, nextGrid);
    double delta = hausdorffDistance(cur.spectrum, next.spectrum);
    cur = std::move(next);
    if (delta < kRefineTol) return cur;
  }
  cur.converged = false;
  return cur;
}

// Apply the substitution to a periodic configuration; the period scales by D.
inline PeriodicConfig substitutePeriodic(const SubstitutionRule& rule,
                                         const PeriodicConfig& cfg) {
  PeriodicConfig out;
  out.p1 = cfg.p1 * rule.blockWidth();
  out.p2 = cfg.p2 * rule.blockHeight();
  out.cell.assign((size_t)out.p1 * out.p2, 0);
  for (int y = 0; y < cfg.p2; ++y)
    for (int x = 0; x < cfg.p1; ++x) {
      LetterIndex a = cfg.cell[(size_t)(x + cfg.p1 * y)];
      for (int fy = 0; fy < rule.blockHeight(); ++fy)
        for (int fx = 0; fx < rule.blockWidth(); ++fx) {
          int gx = rule.blockWidth() * x + fx;
          int gy = rule.blockHeight() * y + fy;
          out.cell[(size_t)(gx + out.p1 * gy)] = rule.image(a, {fx, fy});
        }
    }
  return out;
}

// Eigenvalues of the operator truncated to the box {-R..R}^2 with plain
// (Dirichlet) truncation, sorted ascending. The window must cover the box
// plus the testing-domain margin when an indicator potential is used. Box
// results are approximations; boundary effects scale with boundary/volume.
inline std::vector<double> spectrumBox(const std::function<LetterIndex(Vec2)>& letterAt,
                                       const Potential& pot, const TSpace* space, int halfWidth,
                                       long long dimBudget = 4096) {
  int side = 2 * halfWidth + 1;
  long long dim = (long long)side * side;
  if (dim > dimBudget)
    throw BudgetError("box dimension " + std::to_string(dim) + " exceeds budget " +
                      std::to_string(dimBudget));
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  auto index = [&](int x, int y) {
    return (Eigen::Index)((x + halfWidth) + (long long)side * (y + halfWidth));
  };
  for (int y = -halfWidth; y <= halfWidth; ++y)
    for (int x = -halfWidth; x <= halfWidth; ++x) {
      Eigen::Index s = index(x, y);
      H(s, s) = pot.at(letterAt, space, {x, y});
      if (x + 1 <= halfWidth) {
        H(s, index(x + 1, y)) = 1;
        H(index(x + 1, y), s) = 1;
      }
      if (y + 1 <= halfWidth) {
        H(s, index(x, y + 1)) = 1;
        H(index(x, y + 1), s) = 1;
      }
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("box eigensolver failed");
  return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + dim);
}

inline std::function<LetterIndex(Vec2)> windowAccessor(const Patch& window) {
  return [&window](Vec2 v) { return window.at(v); };
}

inline std::function<LetterIndex(Vec2)> periodicAccessor(const PeriodicConfig& cfg) {
  return [&cfg](Vec2 v) { return cfg.letterAt(v); };
}

// Spectrum of the operator with potential lambda0 on a single lattice line:
// the tensor decomposition gives [-2,2] + ([-2,2] union {sqrt(lambda0^2+4)}),
// i.e. [-4,4] together with a band of width 4 around the 1D bound state.
inline IntervalUnion lineDefectOracle(double lambda0) {
  if (lambda0 < 0) throw ValidationError("line-defect strength must be non-negative");
  if (lambda0 == 0) return IntervalUnion::single(-4, 4);
  double bound = std::sqrt(lambda0 * lambda0 + 4.0);
  return IntervalUnion({{-4, 4}, {bound - 2, bound + 2}});
}

}  // namespace subst
