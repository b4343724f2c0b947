#include "tailgame/tailorder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tailgame/errors.hpp"

namespace tailgame {

Order reverse(Order o) noexcept {
  switch (o) {
    case Order::Less:
      return Order::Greater;
    case Order::Greater:
      return Order::Less;
    default:
      return Order::Equal;
  }
}

const char* to_string(Order o) noexcept {
  switch (o) {
    case Order::Less:
      return "less";
    case Order::Greater:
      return "greater";
    default:
      return "equal";
  }
}

namespace {

void require_shared_support(const PiecewisePolyDensity& f, const PiecewisePolyDensity& g) {
  if (!same_support(f, g)) {
    std::ostringstream os;
    os.precision(17);
    os << "supports differ: [" << f.a() << ", " << f.b() << "] vs [" << g.a() << ", " << g.b() << "]";
    fail(ErrorCode::SupportMismatch, os.str());
  }
}

const Polynomial& piece_on(const PiecewisePolyDensity& f, double s, double e) {
  return f.pieces()[f.piece_index(0.5 * (s + e))];
}

// f - g on [s, e] with negligible coefficients flushed.
Polynomial difference_on(const PiecewisePolyDensity& f, const PiecewisePolyDensity& g, double s,
                         double e) {
  auto [fp, gp] = align_on(piece_on(f, s, e), piece_on(g, s, e), s, e);
  return (fp - gp).flushed(kDifferenceFlush);
}

Order sign_order(double v) {
  if (v < 0.0) return Order::Less;
  if (v > 0.0) return Order::Greater;
  return Order::Equal;
}

}  // namespace

TrichotomyPartition trichotomy_partition(const PiecewisePolyDensity& f, const PiecewisePolyDensity& g) {
  require_shared_support(f, g);
  const std::vector<std::vector<double>> lists{f.breakpoints(), g.breakpoints()};
  const std::vector<double> merged = merge_breakpoints(lists);

  TrichotomyPartition out;
  out.breakpoints.push_back(merged.front());
  for (std::size_t j = 0; j + 1 < merged.size(); ++j) {
    const double s = merged[j];
    const double e = merged[j + 1];
    const Polynomial d = difference_on(f, g, s, e);
    if (d.is_zero()) {
      out.breakpoints.push_back(e);
      out.relation.push_back(Order::Equal);
      continue;
    }
    std::vector<double> cells{s};
    for (double x : real_roots(d, s, e)) cells.push_back(x);
    cells.push_back(e);
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
      out.breakpoints.push_back(cells[i + 1]);
      out.relation.push_back(sign_order(d(0.5 * (cells[i] + cells[i + 1]))));
    }
  }
  return out;
}

std::vector<double> refine_common_partition(const PiecewisePolyDensity& f,
                                            const PiecewisePolyDensity& g) {
  return trichotomy_partition(f, g).breakpoints;
}

SignatureVector signature_vector(const PiecewisePolyDensity& f, std::span<const double> partition,
                                 std::span<const int> degrees) {
  if (partition.size() < 2 || degrees.size() != partition.size() - 1)
    fail(ErrorCode::PartitionMismatch, "need one degree per partition subinterval");
  if (std::abs(partition.front() - f.a()) > kBreakpointTolerance ||
      std::abs(partition.back() - f.b()) > kBreakpointTolerance)
    fail(ErrorCode::PartitionMismatch, "partition does not span the support");
  for (std::size_t i = 1; i < partition.size(); ++i)
    if (!(partition[i] > partition[i - 1]))
      fail(ErrorCode::PartitionMismatch, "partition must be strictly increasing");
  for (double r : f.breakpoints()) {
    const auto it = std::lower_bound(partition.begin(), partition.end(), r - kBreakpointTolerance);
    if (it == partition.end() || std::abs(*it - r) > kBreakpointTolerance)
      fail(ErrorCode::PartitionMismatch, "partition does not refine the density's breakpoints");
  }

  SignatureVector v;
  for (std::size_t j = degrees.size(); j-- > 0;) {
    const double e = partition[j + 1];
    Polynomial q = piece_on(f, partition[j], e);
    const std::size_t begin = v.entries.size();
    for (int k = 0; k <= 1 + degrees[j]; ++k) {
      const double value = q(e);
      v.entries.push_back(k % 2 == 0 ? value : -value);
      q = q.derivative();
    }
    v.block_bounds.emplace_back(begin, v.entries.size());
  }
  return v;
}

Ordering tail_compare(const PiecewisePolyDensity& f, const PiecewisePolyDensity& g) {
  const TrichotomyPartition tp = trichotomy_partition(f, g);
  const auto& r = tp.breakpoints;
  const std::size_t blocks = tp.relation.size();
  std::vector<int> degrees(blocks);
  for (std::size_t j = 0; j < blocks; ++j)
    degrees[j] = std::max(piece_on(f, r[j], r[j + 1]).degree(), piece_on(g, r[j], r[j + 1]).degree());

  const SignatureVector vf = signature_vector(f, r, degrees);
  const SignatureVector vg = signature_vector(g, r, degrees);
  for (std::size_t block = 0; block < blocks; ++block) {
    const std::size_t j = blocks - 1 - block;
    if (tp.relation[j] == Order::Equal) continue;
    const auto [begin, end] = vf.block_bounds[block];
    for (std::size_t i = begin; i < end; ++i) {
      const double x = vf.entries[i];
      const double y = vg.entries[i];
      if (!std::isfinite(x) || !std::isfinite(y))
        fail(ErrorCode::NumericalFailure, "derivative overflow while building signature vectors");
      const double scale = std::max({1.0, std::abs(x), std::abs(y)});
      if (std::abs(x - y) <= kSignatureTolerance * scale) continue;
      Witness w{j, static_cast<int>(i - begin), r[j], r[j + 1]};
      return {x < y ? Order::Less : Order::Greater, w};
    }
  }
  return {Order::Equal, std::nullopt};
}

std::optional<int> moment_dominance_index(const PiecewisePolyDensity& f,
                                          const PiecewisePolyDensity& g, int n_max) {
  if (n_max < 1) fail(ErrorCode::PreconditionViolation, "n_max must be at least 1");
  if (tail_compare(f, g).order != Order::Less)
    fail(ErrorCode::NotComparable, "moment dominance needs f strictly below g in the tail order");

  const TrichotomyPartition tp = trichotomy_partition(f, g);
  const auto& r = tp.breakpoints;
  std::vector<Polynomial> gaps;  // g - f per non-equal subinterval
  std::vector<std::size_t> where;
  for (std::size_t j = 0; j < tp.relation.size(); ++j) {
    if (tp.relation[j] == Order::Equal) continue;
    gaps.push_back(difference_on(g, f, r[j], r[j + 1]));
    where.push_back(j);
  }

  std::vector<double> diff(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    CompensatedSum s;
    for (std::size_t i = 0; i < gaps.size(); ++i)
      s.add(weighted_moment(gaps[i], r[where[i]], r[where[i] + 1], n));
    diff[static_cast<std::size_t>(n - 1)] = s.value();
  }
  if (!(diff.back() > 0.0)) return std::nullopt;
  int onset = n_max;
  while (onset > 1 && diff[static_cast<std::size_t>(onset - 2)] > 0.0) --onset;
  return onset;
}

CategoricalPayoff::CategoricalPayoff(std::vector<double> mass) : mass_(std::move(mass)) {
  if (mass_.empty()) fail(ErrorCode::InvalidInput, "categorical payoff needs at least one category");
  CompensatedSum total;
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m))
      fail(ErrorCode::InvalidInput, "categorical masses must be finite and nonnegative");
    total.add(m);
  }
  if (std::abs(total.value() - 1.0) > kMassTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "categorical masses sum to " << total.value() << ", expected 1";
    fail(ErrorCode::InvalidInput, os.str());
  }
}

Ordering lex_compare_from_right(std::span<const double> p, std::span<const double> q, double threshold) {
  if (p.size() != q.size()) fail(ErrorCode::DimensionMismatch, "payoffs have different category counts");
  for (std::size_t i = p.size(); i-- > 0;) {
    const double diff = p[i] - q[i];
    if (std::abs(diff) > threshold) {
      Witness w;
      w.position = i + 1;
      return {diff < 0.0 ? Order::Less : Order::Greater, w};
    }
  }
  return {Order::Equal, std::nullopt};
}

Ordering categorical_lex_compare(const CategoricalPayoff& p, const CategoricalPayoff& q) {
  return lex_compare_from_right(p.mass(), q.mass(), kCategoricalThreshold);
}

CategoricalPayoff discretize(const PiecewisePolyDensity& f, std::span<const double> cutpoints) {
  for (std::size_t i = 0; i < cutpoints.size(); ++i) {
    if (!(cutpoints[i] > f.a() && cutpoints[i] < f.b()))
      fail(ErrorCode::BadCutpoints, "cutpoints must lie strictly inside the support");
    if (i > 0 && !(cutpoints[i] > cutpoints[i - 1]))
      fail(ErrorCode::BadCutpoints, "cutpoints must be strictly increasing");
  }
  std::vector<double> edges{f.a()};
  edges.insert(edges.end(), cutpoints.begin(), cutpoints.end());
  edges.push_back(f.b());
  std::vector<double> mass;
  CompensatedSum total;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    mass.push_back(std::max(0.0, piece_integral(f, edges[i], edges[i + 1])));
    total.add(mass.back());
  }
  if (std::abs(total.value() - 1.0) > 1e-6) {
    std::ostringstream os;
    os.precision(17);
    os << "density has mass " << total.value() << "; discretize expects a normalized density";
    fail(ErrorCode::InvalidInput, os.str());
  }
  for (double& m : mass) m /= total.value();
  return CategoricalPayoff(std::move(mass));
}

std::vector<double> quantile_cutpoints(const PiecewisePolyDensity& f, std::span<const double> levels) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0 && levels[i] < 1.0))
      fail(ErrorCode::BadCutpoints, "quantile levels must lie in (0, 1)");
    if (i > 0 && !(levels[i] > levels[i - 1]))
      fail(ErrorCode::BadCutpoints, "quantile levels must be strictly increasing");
  }
  const double total = piece_integral(f, f.a(), f.b());
  std::vector<double> out;
  for (double level : levels) {
    double lo = f.a();
    double hi = f.b();
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (piece_integral(f, f.a(), mid) < level * total) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

}  // namespace tailgame
