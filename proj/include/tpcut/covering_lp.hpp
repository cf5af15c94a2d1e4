#pragma once

// LP relaxation of the path-covering program
//
//   min c.w   s.t.  sum_{i in p} w_i >= 1  for every path p,   0 <= w <= 1.
//
// The solver runs a revised simplex with Bland's rule on the dual packing
// program  max sum_p y_p  s.t.  sum_{p ni i} y_p <= c_i,  y >= 0, whose slack
// basis is feasible at the origin. The covering weights are read off the
// optimal simplex multipliers. Upper bounds w_i <= 1 never bind at an optimum
// (costs are positive), so they are not modelled.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tpcut/core.hpp"
#include "tpcut/pathspace.hpp"

namespace tpcut {

struct FractionalSolution {
  std::vector<double> weights;     // indexed by element id; zero off the candidate set
  std::vector<double> path_duals;  // optimal packing y_p, one per path
  double objective = 0.0;
  std::size_t iterations = 0;
};

struct LpOptions {
  std::size_t max_iterations = 0;  // 0 = automatic cap
  std::size_t refactor_every = 64;
  Deadline deadline;
};

namespace detail {

class PackingSimplex {
 public:
  PackingSimplex(const CoveringInstance& cov, const LpOptions& opts) : cov_(cov), opts_(opts) {
    row_of_.assign(cov.element_count(), kNoRow);
    for (Element e = 0; e < cov.element_count(); ++e) {
      if (cov.covers[e].empty()) continue;
      row_of_[e] = static_cast<std::uint32_t>(rows_.size());
      rows_.push_back(e);
    }
    columns_.resize(cov.paths.size());
    for (std::size_t p = 0; p < cov.paths.size(); ++p) {
      for (Element e : cov.path_elements(p))
        if (row_of_[e] != kNoRow) columns_[p].push_back(row_of_[e]);
      if (columns_[p].empty())
        throw InfeasibleError("path " + std::to_string(p) + " contains no removable element");
    }
    m_ = rows_.size();
    paths_ = columns_.size();
    rhs_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) rhs_[r] = cov.costs[rows_[r]];
  }

  FractionalSolution solve() {
    FractionalSolution out;
    out.weights.assign(cov_.element_count(), 0.0);
    out.path_duals.assign(paths_, 0.0);
    if (paths_ == 0) return out;

    basis_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) basis_[r] = paths_ + r;
    refactor();

    const std::size_t cap =
        opts_.max_iterations ? opts_.max_iterations : 1000 + 50 * (m_ + paths_);
    std::size_t since_refactor = 0;
    bool fresh = true;
    for (;;) {
      compute_multipliers();
      const std::size_t entering = choose_entering();
      if (entering == kNone) {
        if (fresh) break;
        refactor();
        since_refactor = 0;
        fresh = true;
        continue;
      }
      if (out.iterations >= cap)
        throw ResourceError("covering LP: iteration cap of " + std::to_string(cap) + " reached");
      opts_.deadline.check("covering LP");
      pivot(entering);
      ++out.iterations;
      fresh = false;
      if (++since_refactor == opts_.refactor_every) {
        refactor();
        since_refactor = 0;
        fresh = true;
      }
    }

    for (std::size_t r = 0; r < m_; ++r) {
      out.weights[rows_[r]] = std::clamp(pi_[r], 0.0, 1.0);
      if (basis_[r] < paths_) out.path_duals[basis_[r]] = std::max(0.0, x_[r]);
    }
    for (std::size_t r = 0; r < m_; ++r) out.objective += rhs_[r] * out.weights[rows_[r]];
    return out;
  }

 private:
  static constexpr std::uint32_t kNoRow = UINT32_MAX;
  static constexpr std::size_t kNone = SIZE_MAX;
  static constexpr double kPriceTol = 1e-11;
  static constexpr double kPivotTol = 1e-12;

  double& inv(std::size_t r, std::size_t c) { return binv_[r * m_ + c]; }

  // y-column j as a sparse list of rows.
  template <typename F>
  void for_column(std::size_t j, F&& f) const {
    if (j < paths_) {
      for (auto r : columns_[j]) f(r);
    } else {
      f(static_cast<std::uint32_t>(j - paths_));
    }
  }

  void compute_multipliers() {
    pi_.assign(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= paths_) continue;  // slack columns have zero objective
      const double* row = &binv_[r * m_];
      for (std::size_t k = 0; k < m_; ++k) pi_[k] += row[k];
    }
  }

  // Bland: lowest-index column with positive reduced cost.
  std::size_t choose_entering() const {
    for (std::size_t p = 0; p < paths_; ++p) {
      double s = 1.0;
      for (auto r : columns_[p]) s -= pi_[r];
      if (s > kPriceTol) return p;
    }
    for (std::size_t r = 0; r < m_; ++r)
      if (-pi_[r] > kPriceTol) return paths_ + r;
    return kNone;
  }

  void pivot(std::size_t entering) {
    dir_.assign(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      double s = 0.0;
      for_column(entering, [&](std::uint32_t k) { s += binv_[r * m_ + k]; });
      dir_[r] = s;
    }
    std::size_t leave = kNone;
    double best = kInfinity;
    for (std::size_t r = 0; r < m_; ++r) {
      if (dir_[r] <= kPivotTol) continue;
      const double ratio = x_[r] / dir_[r];
      if (leave == kNone || ratio < best - 1e-12 ||
          (ratio <= best + 1e-12 && basis_[r] < basis_[leave])) {
        best = std::min(best, ratio);
        leave = r;
      }
    }
    if (leave == kNone) throw InfeasibleError("covering LP: dual unbounded");

    const double d = dir_[leave];
    double* prow = &binv_[leave * m_];
    for (std::size_t k = 0; k < m_; ++k) prow[k] /= d;
    x_[leave] /= d;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == leave || dir_[r] == 0.0) continue;
      const double f = dir_[r];
      double* row = &binv_[r * m_];
      for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
      x_[r] -= f * x_[leave];
      if (x_[r] < 0.0 && x_[r] > -1e-12) x_[r] = 0.0;
    }
    basis_[leave] = entering;
  }

  // Rebuilds B^{-1} from the basis columns by Gauss-Jordan elimination and
  // recomputes the basic solution.
  void refactor() {
    std::vector<double> b(m_ * m_, 0.0);
    for (std::size_t c = 0; c < m_; ++c)
      for_column(basis_[c], [&](std::uint32_t r) { b[r * m_ + c] = 1.0; });
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) binv_[r * m_ + r] = 1.0;
    for (std::size_t col = 0; col < m_; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < m_; ++r)
        if (std::abs(b[r * m_ + col]) > std::abs(b[piv * m_ + col])) piv = r;
      if (std::abs(b[piv * m_ + col]) < 1e-14) throw ResourceError("covering LP: singular basis");
      if (piv != col)
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(b[piv * m_ + k], b[col * m_ + k]);
          std::swap(binv_[piv * m_ + k], binv_[col * m_ + k]);
        }
      const double d = b[col * m_ + col];
      for (std::size_t k = 0; k < m_; ++k) {
        b[col * m_ + k] /= d;
        binv_[col * m_ + k] /= d;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double f = b[r * m_ + col];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          b[r * m_ + k] -= f * b[col * m_ + k];
          binv_[r * m_ + k] -= f * binv_[col * m_ + k];
        }
      }
    }
    // Row c of B^{-1} belongs to basis position c.
    x_.assign(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      double s = 0.0;
      for (std::size_t k = 0; k < m_; ++k) s += binv_[r * m_ + k] * rhs_[k];
      x_[r] = std::abs(s) < 1e-13 ? 0.0 : s;
    }
  }

  const CoveringInstance& cov_;
  const LpOptions& opts_;
  std::vector<Element> rows_;
  std::vector<std::uint32_t> row_of_;
  std::vector<std::vector<std::uint32_t>> columns_;
  std::vector<double> rhs_;
  std::size_t m_ = 0;
  std::size_t paths_ = 0;
  std::vector<std::size_t> basis_;
  std::vector<double> binv_;
  std::vector<double> x_;
  std::vector<double> pi_;
  std::vector<double> dir_;
};

}  // namespace detail

/// Optimal fractional covering weights for the path family.
inline FractionalSolution solve_covering_lp(const CoveringInstance& cov,
                                            const LpOptions& opts = {}) {
  return detail::PackingSimplex(cov, opts).solve();
}

}  // namespace tpcut
