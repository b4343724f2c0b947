#pragma once

#include <span>
#include <string>
#include <vector>

#include "tailgame/polynomial.hpp"

namespace tailgame {

/// Tolerances shared by the density checks.
inline constexpr double kNonnegativityTolerance = 1e-9;
inline constexpr double kMassTolerance = 1e-9;
inline constexpr double kContinuityTolerance = 1e-9;
/// Breakpoints closer than this are treated as one.
inline constexpr double kBreakpointTolerance = 1e-12;
inline constexpr int kDefaultMomentCount = 64;

/// Piecewise polynomial density on a compact support [a, b] with a >= 1.
///
/// Piece j is defined on [r_j, r_{j+1}]. Evaluation at an interior breakpoint
/// uses the piece to its right; the last piece is closed at b. Outside the
/// support the density is zero.
///
/// Construction enforces structure only (ordering, piece count, a >= 1).
/// Nonnegativity and unit mass are checked by validate(), so malformed
/// candidates can still be represented and reported on.
class PiecewisePolyDensity {
 public:
  PiecewisePolyDensity(std::vector<double> breakpoints, std::vector<Polynomial> pieces,
                       bool continuous = false);

  static PiecewisePolyDensity uniform(double a, double b);

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<Polynomial>& pieces() const noexcept { return pieces_; }
  std::size_t piece_count() const noexcept { return pieces_.size(); }
  double a() const noexcept { return breakpoints_.front(); }
  double b() const noexcept { return breakpoints_.back(); }
  /// Declared continuous: validate() then checks agreement at breakpoints.
  bool continuous() const noexcept { return continuous_; }

  std::size_t piece_index(double x) const;
  double operator()(double x) const;

  PiecewisePolyDensity scaled(double factor) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<Polynomial> pieces_;
  bool continuous_;
};

/// Exact integral of f over [lo, hi] ⊆ [a, b]. Throws RangeError otherwise.
double piece_integral(const PiecewisePolyDensity& f, double lo, double hi);

/// n-th raw moment, n >= 1. Throws OverflowError when the value leaves the
/// double range.
double moment(const PiecewisePolyDensity& f, int n);

/// Finite prefix m(1..n_max) of the moment sequence.
struct MomentSequence {
  std::vector<double> values;  // values[n - 1] = m(n)

  int n_max() const noexcept { return static_cast<int>(values.size()); }
  double operator()(int n) const { return values.at(static_cast<std::size_t>(n - 1)); }
};

MomentSequence moments(const PiecewisePolyDensity& f, int n_max = kDefaultMomentCount);

struct ValidationReport {
  bool valid = true;
  double mass = 0.0;
  double min_value = 0.0;
  std::vector<std::string> violations;
};

ValidationReport validate(const PiecewisePolyDensity& f);

/// True when both supports agree within kBreakpointTolerance.
bool same_support(const PiecewisePolyDensity& f, const PiecewisePolyDensity& g);

/// Sorted union of breakpoints, near-duplicates merged.
std::vector<double> merge_breakpoints(std::span<const std::vector<double>> lists);

/// Weighted sum of densities sharing a support, on the common refinement of
/// their partitions. Throws SupportMismatch or DimensionMismatch.
PiecewisePolyDensity mix(std::span<const PiecewisePolyDensity> densities,
                         std::span<const double> weights);

}  // namespace tailgame
