#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tailgame/density.hpp"

namespace tailgame {

/// Coefficients of f - g below this are treated as zero.
inline constexpr double kDifferenceFlush = 1e-12;
/// Relative tolerance when comparing signature entries.
inline constexpr double kSignatureTolerance = 1e-9;
/// Strictness threshold of the categorical order.
inline constexpr double kCategoricalThreshold = 1e-9;

enum class Order { Less, Equal, Greater };

Order reverse(Order o) noexcept;
const char* to_string(Order o) noexcept;

/// What decided a comparison. For densities: the subinterval [lo, hi] of the
/// common refinement (index counted from a) and the derivative order taken at
/// hi. For categorical payoffs: the 1-based category.
struct Witness {
  std::size_t position = 0;
  int derivative_order = 0;
  double lo = 0.0;
  double hi = 0.0;
};

struct Ordering {
  Order order = Order::Equal;
  std::optional<Witness> witness;  // present iff order != Equal
};

/// Common refinement of f and g on which each open subinterval carries one of
/// f = g, f < g, f > g. `relation[j]` is the relation of f to g on
/// (breakpoints[j], breakpoints[j+1]).
struct TrichotomyPartition {
  std::vector<double> breakpoints;
  std::vector<Order> relation;
};

TrichotomyPartition trichotomy_partition(const PiecewisePolyDensity& f, const PiecewisePolyDensity& g);

/// Breakpoints of both densities plus every root of f - g. Throws
/// SupportMismatch when the supports differ.
std::vector<double> refine_common_partition(const PiecewisePolyDensity& f,
                                            const PiecewisePolyDensity& g);

struct SignatureVector {
  std::vector<double> entries;
  /// [begin, end) into entries, one per subinterval, listed last to first.
  std::vector<std::pair<std::size_t, std::size_t>> block_bounds;
};

/// For every subinterval from last to first, appends (-1)^k f^(k)(right end)
/// for k = 0 .. 1 + degrees[j], using the piece to the left of the endpoint.
/// `degrees` is indexed by subinterval from the left. Throws
/// PartitionMismatch when the partition does not refine f.
SignatureVector signature_vector(const PiecewisePolyDensity& f, std::span<const double> partition,
                                 std::span<const int> degrees);

/// Decides the tail order of two densities on a shared support through the
/// lexicographic order of their signature vectors.
Ordering tail_compare(const PiecewisePolyDensity& f, const PiecewisePolyDensity& g);

/// Smallest N <= n_max with m_f(k) < m_g(k) for all k in [N, n_max], from the
/// moment differences over the common refinement; nullopt when the dominance
/// has not set in by n_max. Requires tail_compare(f, g) == Less, otherwise
/// throws NotComparable.
std::optional<int> moment_dominance_index(const PiecewisePolyDensity& f,
                                          const PiecewisePolyDensity& g,
                                          int n_max = kDefaultMomentCount);

/// Probability masses over loss categories 1..K (ascending severity).
class CategoricalPayoff {
 public:
  /// Throws InvalidInput unless mass is nonnegative and sums to 1 within 1e-9.
  explicit CategoricalPayoff(std::vector<double> mass);

  const std::vector<double>& mass() const noexcept { return mass_; }
  std::size_t size() const noexcept { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }

 private:
  std::vector<double> mass_;
};

/// Lexicographic comparison from the last coordinate down to the first;
/// differences of at most `threshold` count as ties.
Ordering lex_compare_from_right(std::span<const double> p, std::span<const double> q,
                                double threshold = kCategoricalThreshold);

Ordering categorical_lex_compare(const CategoricalPayoff& p, const CategoricalPayoff& q);

/// Masses of f on the cells cut by strictly increasing interior cutpoints.
CategoricalPayoff discretize(const PiecewisePolyDensity& f, std::span<const double> cutpoints);

/// Points where the distribution function of f reaches each probability in
/// `levels` (strictly increasing, inside (0, 1)).
std::vector<double> quantile_cutpoints(const PiecewisePolyDensity& f, std::span<const double> levels);

}  // namespace tailgame
