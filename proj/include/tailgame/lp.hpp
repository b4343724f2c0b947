#pragma once

#include <span>
#include <vector>

namespace tailgame {

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Throws DimensionMismatch on ragged input.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transposed() const;
  Matrix negated() const;
  double min() const;

  /// x^T A, one entry per column.
  std::vector<double> row_mix(std::span<const double> x) const;
  /// A y, one entry per row.
  std::vector<double> col_mix(std::span<const double> y) const;
  /// x^T A y.
  double bilinear(std::span<const double> x, std::span<const double> y) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// General LP: maximize c.x subject to the constraints and x >= 0.

enum class Relation { LessEqual, GreaterEqual, Equal };

struct LinearConstraint {
  std::vector<double> coeffs;
  Relation relation;
  double rhs;
};

struct LinearProgram {
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LinearProgramSolution {
  LPStatus status = LPStatus::Infeasible;
  std::vector<double> x;
  double value = 0.0;
  /// One multiplier per constraint with value = sum(duals[i] * rhs[i]).
  std::vector<double> duals;
};

/// Two-phase dense simplex with Bland's pivot rule. Deterministic.
LinearProgramSolution solve_linear_program(const LinearProgram& lp);

// ---------------------------------------------------------------------------
// Zero-sum games.

inline constexpr double kGuaranteeSlack = 1e-12;
inline constexpr double kCertificateTolerance = 1e-9;

enum class Sense { Maximize, Minimize };

struct Guarantee {
  Matrix payoff;
  double bound;
};

/// One stage of the lexicographic procedure. With Maximize the row player
/// maximizes min_j (x^T payoff)_j while keeping (x^T G)_j >= bound - slack for
/// every guarantee G; with Minimize the column player minimizes
/// max_i (payoff y)_i while keeping (G y)_i <= bound + slack.
struct StageLP {
  Matrix payoff;
  std::vector<Guarantee> guarantees;
  Sense sense = Sense::Maximize;
};

struct LPSolution {
  /// Strategy of the optimizing player (length rows for Maximize, cols for
  /// Minimize) and the opponent's strategy read from the LP duals.
  std::vector<double> strategy;
  double value = 0.0;
  std::vector<double> dual_strategy;
  LPStatus status = LPStatus::Optimal;
};

/// Throws Infeasible when the guarantees cannot be met.
LPSolution solve_stage(const StageLP& stage);

struct ZeroSumSolution {
  std::vector<double> x;
  std::vector<double> y;
  double value = 0.0;
};

/// Throws NumericalFailure unless min_j (x^T A)_j >= v - 1e-9 and
/// max_i (A y)_i <= v + 1e-9.
void certify_saddle(const Matrix& payoff, std::span<const double> x, std::span<const double> y,
                    double value);

/// Saddle point of the matrix game where rows maximize. Throws
/// NumericalFailure if the saddle certificate fails by more than 1e-9.
ZeroSumSolution solve_zero_sum(const Matrix& payoff);

}  // namespace tailgame
