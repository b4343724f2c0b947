#include "tailgame/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tailgame/errors.hpp"
#include "tailgame/polynomial.hpp"

namespace tailgame {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) fail(ErrorCode::DimensionMismatch, "matrix must be nonempty");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) fail(ErrorCode::DimensionMismatch, "matrix rows differ in length");
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(rows[i][j])) fail(ErrorCode::InvalidInput, "matrix entry is not finite");
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::negated() const {
  Matrix t = *this;
  for (double& v : t.data_) v = -v;
  return t;
}

double Matrix::min() const { return *std::min_element(data_.begin(), data_.end()); }

std::vector<double> Matrix::row_mix(std::span<const double> x) const {
  if (x.size() != rows_) fail(ErrorCode::DimensionMismatch, "row strategy length differs from row count");
  std::vector<double> out(cols_);
  for (std::size_t j = 0; j < cols_; ++j) {
    CompensatedSum s;
    for (std::size_t i = 0; i < rows_; ++i) s.add(x[i] * (*this)(i, j));
    out[j] = s.value();
  }
  return out;
}

std::vector<double> Matrix::col_mix(std::span<const double> y) const {
  if (y.size() != cols_) fail(ErrorCode::DimensionMismatch, "column strategy length differs from column count");
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    CompensatedSum s;
    for (std::size_t j = 0; j < cols_; ++j) s.add((*this)(i, j) * y[j]);
    out[i] = s.value();
  }
  return out;
}

double Matrix::bilinear(std::span<const double> x, std::span<const double> y) const {
  const std::vector<double> ay = col_mix(y);
  if (x.size() != rows_) fail(ErrorCode::DimensionMismatch, "row strategy length differs from row count");
  CompensatedSum s;
  for (std::size_t i = 0; i < rows_; ++i) s.add(x[i] * ay[i]);
  return s.value();
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kPhaseOneTolerance = 1e-9;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0),
        barred_(cols, false) {}

  double& at(std::size_t i, std::size_t j) { return cells_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double& cost(std::size_t j) { return at(rows_, j); }
  double& objective() { return at(rows_, cols_); }

  std::vector<std::size_t>& basis() { return basis_; }
  std::vector<bool>& barred() { return barred_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  // Objective row for maximizing c.x given the current basis.
  void price(const std::vector<double>& c) {
    for (std::size_t j = 0; j <= cols_; ++j) at(rows_, j) = j < cols_ ? -c[j] : 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(rows_, j) += cb * at(i, j);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Bland's rule: lowest-index improving column, ties in the ratio test go to
  // the lowest-index basic variable.
  LPStatus run() {
    for (;;) {
      std::size_t entering = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!barred_[j] && cost(j) < -kPivotEps) {
          entering = j;
          break;
        }
      }
      if (entering == cols_) return LPStatus::Optimal;
      std::size_t leaving = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_; ++i) {
        const double a = at(i, entering);
        if (a <= kPivotEps) continue;
        const double ratio = rhs(i) / a;
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leaving < rows_ && basis_[i] < basis_[leaving])) {
          best = std::min(best, ratio);
          leaving = i;
        }
      }
      if (leaving == rows_) return LPStatus::Unbounded;
      pivot(leaving, entering);
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> cells_;
  std::vector<std::size_t> basis_;
  std::vector<bool> barred_;
};

}  // namespace

LinearProgramSolution solve_linear_program(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  const std::size_t m = lp.constraints.size();

  std::vector<LinearConstraint> rows = lp.constraints;
  std::vector<double> flip(m, 1.0);
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = rows[i];
    if (row.coeffs.size() != n) fail(ErrorCode::DimensionMismatch, "constraint width differs from variable count");
    if (row.rhs < 0.0) {
      flip[i] = -1.0;
      row.rhs = -row.rhs;
      for (double& c : row.coeffs) c = -c;
      if (row.relation == Relation::LessEqual) {
        row.relation = Relation::GreaterEqual;
      } else if (row.relation == Relation::GreaterEqual) {
        row.relation = Relation::LessEqual;
      }
    }
    if (row.relation != Relation::Equal) ++slacks;
    if (row.relation != Relation::LessEqual) ++artificials;
  }

  const std::size_t cols = n + slacks + artificials;
  const std::size_t first_artificial = n + slacks;
  Tableau t(m, cols);
  std::vector<std::size_t> unit_column(m);  // column holding +e_i initially
  std::size_t next_slack = n;
  std::size_t next_artificial = first_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = rows[i];
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = row.coeffs[j];
    t.rhs(i) = row.rhs;
    if (row.relation == Relation::LessEqual) {
      t.at(i, next_slack) = 1.0;
      unit_column[i] = next_slack;
      t.basis()[i] = next_slack++;
    } else {
      if (row.relation == Relation::GreaterEqual) t.at(i, next_slack++) = -1.0;
      t.at(i, next_artificial) = 1.0;
      unit_column[i] = next_artificial;
      t.basis()[i] = next_artificial++;
    }
  }

  LinearProgramSolution sol;
  if (artificials > 0) {
    std::vector<double> phase_one(cols, 0.0);
    for (std::size_t j = first_artificial; j < cols; ++j) phase_one[j] = -1.0;
    t.price(phase_one);
    if (t.run() != LPStatus::Optimal) fail(ErrorCode::NumericalFailure, "phase one did not terminate");
    if (t.objective() < -kPhaseOneTolerance) {
      sol.status = LPStatus::Infeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis()[i] < first_artificial) continue;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (std::abs(t.at(i, j)) > 1e-9) {
          t.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = first_artificial; j < cols; ++j) t.barred()[j] = true;
  }

  std::vector<double> c(cols, 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), c.begin());
  t.price(c);
  sol.status = t.run();
  if (sol.status != LPStatus::Optimal) return sol;

  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis()[i] < n) sol.x[t.basis()[i]] = t.rhs(i);
  sol.value = t.objective();
  sol.duals.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.duals[i] = flip[i] * t.cost(unit_column[i]);
  return sol;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> clean_simplex(std::vector<double> v) {
  for (double& x : v)
    if (x < 0.0) x = 0.0;
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  if (s > 0.0)
    for (double& x : v) x /= s;
  return v;
}

// Row player maximizes min_j (x^T A)_j subject to the guarantees.
LPSolution solve_row_stage(const Matrix& a, const std::vector<Guarantee>& guarantees) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  const double shift = 1.0 - a.min();

  LinearProgram lp;
  lp.objective.assign(n + 1, 0.0);
  lp.objective[n] = 1.0;  // t
  for (std::size_t j = 0; j < m; ++j) {
    LinearConstraint row{std::vector<double>(n + 1, 0.0), Relation::LessEqual, 0.0};
    for (std::size_t i = 0; i < n; ++i) row.coeffs[i] = -(a(i, j) + shift);
    row.coeffs[n] = 1.0;
    lp.constraints.push_back(std::move(row));
  }
  for (const auto& g : guarantees) {
    if (g.payoff.rows() != n || g.payoff.cols() != m)
      fail(ErrorCode::DimensionMismatch, "guarantee matrix dimensions differ from the stage payoff");
    for (std::size_t j = 0; j < m; ++j) {
      LinearConstraint row{std::vector<double>(n + 1, 0.0), Relation::GreaterEqual, g.bound - kGuaranteeSlack};
      for (std::size_t i = 0; i < n; ++i) row.coeffs[i] = g.payoff(i, j);
      lp.constraints.push_back(std::move(row));
    }
  }
  LinearConstraint simplex{std::vector<double>(n + 1, 1.0), Relation::Equal, 1.0};
  simplex.coeffs[n] = 0.0;
  lp.constraints.push_back(std::move(simplex));

  const LinearProgramSolution sol = solve_linear_program(lp);
  if (sol.status == LPStatus::Infeasible)
    fail(ErrorCode::Infeasible, "stage guarantees cannot be met; this indicates a tolerance problem");
  if (sol.status != LPStatus::Optimal) fail(ErrorCode::NumericalFailure, "stage LP is unbounded");

  LPSolution out;
  out.strategy = clean_simplex(std::vector<double>(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n)));
  out.value = sol.value - shift;
  out.dual_strategy = clean_simplex(std::vector<double>(sol.duals.begin(), sol.duals.begin() + static_cast<std::ptrdiff_t>(m)));
  out.status = LPStatus::Optimal;
  return out;
}

}  // namespace

LPSolution solve_stage(const StageLP& stage) {
  if (stage.payoff.rows() == 0 || stage.payoff.cols() == 0)
    fail(ErrorCode::DimensionMismatch, "stage payoff is empty");
  for (const auto& g : stage.guarantees)
    if (!std::isfinite(g.bound)) fail(ErrorCode::InvalidInput, "guarantee bound is not finite");
  if (stage.sense == Sense::Maximize) return solve_row_stage(stage.payoff, stage.guarantees);

  // The minimizing column player is the maximizing row player of -A^T.
  std::vector<Guarantee> mirrored;
  for (const auto& g : stage.guarantees) mirrored.push_back({g.payoff.transposed().negated(), -g.bound});
  LPSolution sol = solve_row_stage(stage.payoff.transposed().negated(), mirrored);
  sol.value = -sol.value;
  return sol;
}

void certify_saddle(const Matrix& payoff, std::span<const double> x, std::span<const double> y,
                    double value) {
  const std::vector<double> xa = payoff.row_mix(x);
  const std::vector<double> ay = payoff.col_mix(y);
  const double floor = *std::min_element(xa.begin(), xa.end());
  const double ceiling = *std::max_element(ay.begin(), ay.end());
  if (floor < value - kCertificateTolerance || ceiling > value + kCertificateTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "saddle certificate failed: min_j (xA)_j = " << floor << ", max_i (Ay)_i = " << ceiling
       << ", value = " << value;
    fail(ErrorCode::NumericalFailure, os.str());
  }
}

ZeroSumSolution solve_zero_sum(const Matrix& payoff) {
  const LPSolution row = solve_stage({payoff, {}, Sense::Maximize});
  const LPSolution col = solve_stage({payoff, {}, Sense::Minimize});
  ZeroSumSolution out{row.strategy, col.strategy, row.value};
  certify_saddle(payoff, out.x, out.y, out.value);
  return out;
}

}  // namespace tailgame
