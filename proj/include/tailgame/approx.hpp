#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tailgame/density.hpp"
#include "tailgame/polynomial.hpp"

namespace tailgame {

inline constexpr int kDefaultCertificationGrid = 4096;
inline constexpr int kMinCertificationGrid = 256;
inline constexpr int kSupBoundGrid = 4096;

/// A continuous density on [a, b] that the approximation targets.
class TargetDensity {
 public:
  using Function = std::function<double(double)>;

  /// Wraps a deterministic function; it is taken to be zero outside [a, b].
  static TargetDensity from_function(Function eval, double a, double b);
  static TargetDensity from_density(const PiecewisePolyDensity& f);
  /// Linear interpolation through (xs, ys), rescaled to unit mass.
  static TargetDensity tabulated(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  /// max f over a uniform 4097-point grid on [a, b].
  double sup_bound() const noexcept { return sup_bound_; }

 private:
  TargetDensity(Function eval, double a, double b);

  Function eval_;
  double a_;
  double b_;
  double sup_bound_;
};

/// Gaussian kernel estimate truncated to [min - 3h, max + 3h] ∩ [1, inf) and
/// renormalized there. Without a bandwidth, Silverman's rule
/// 1.06 * sd * n^(-1/5) is used.
TargetDensity kde_from_samples(std::span<const double> samples,
                               std::optional<double> bandwidth = std::nullopt);

double silverman_bandwidth(std::span<const double> samples);

/// Bernstein polynomial of f of the given degree, kept in Bernstein form on
/// [a, b].
Polynomial bernstein_fit(const TargetDensity& f, int degree);

struct Truncation {
  PiecewisePolyDensity density;
  double alpha;
};

/// alpha * max(0, p) on [a, b] with alpha chosen for unit mass. Breakpoints are
/// a, b and the sign changes of p. Throws ZeroMass when p <= 0 throughout.
Truncation truncate_renormalize(const Polynomial& p, double a, double b);

/// max |f - g| over grid_size uniformly spaced points per piece of g
/// (x = lo + (hi - lo) * i / grid_size, i < grid_size) plus every breakpoint,
/// where breakpoints are probed from both adjacent pieces. Doubling grid_size
/// only adds points.
double certified_sup_error(const TargetDensity& f, const PiecewisePolyDensity& g,
                           int grid_size = kDefaultCertificationGrid);

/// Same grid, for a single polynomial on [a, b].
double certified_sup_error(const TargetDensity& f, const Polynomial& p, double a, double b,
                           int grid_size = kDefaultCertificationGrid);

enum class SearchPhase { Doubling, Bisection };

struct SearchTrial {
  int degree;
  SearchPhase phase;
  double sup_error;  // +inf when the fit had no positive mass
  bool passed;
};

struct ApproximationResult {
  PiecewisePolyDensity density;
  int degree;
  double alpha;
  double sup_error;
  double epsilon;
  /// Grid sup-error of the raw Bernstein fit before truncation.
  double raw_sup_error;
  std::vector<SearchTrial> trace;
};

/// Approximation at one fixed degree, without search.
ApproximationResult approximate_at(const TargetDensity& f, int degree, double epsilon,
                                   int grid_size = kDefaultCertificationGrid);

/// Smallest Bernstein degree whose truncated, renormalized fit is within
/// epsilon: doubling from degree 1, then bisection between the last failing
/// and first passing degree. Throws NoConvergence past the degree cap.
ApproximationResult degree_search(const TargetDensity& f, double epsilon,
                                  int grid_size = kDefaultCertificationGrid);

const char* to_string(SearchPhase phase) noexcept;

}  // namespace tailgame
