#include "tailgame/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tailgame/errors.hpp"

namespace tailgame {

namespace {

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double grid_point(double lo, double hi, int i, int n) {
  return lo + (hi - lo) * (static_cast<double>(i) / n);
}

}  // namespace

TargetDensity::TargetDensity(Function eval, double a, double b)
    : eval_(std::move(eval)), a_(a), b_(b), sup_bound_(0.0) {
  if (!(b_ > a_)) fail(ErrorCode::InvalidInput, "target support must satisfy a < b");
  if (a_ < 1.0) fail(ErrorCode::InvalidInput, "target support must lie in [1, inf)");
  for (int i = 0; i <= kSupBoundGrid; ++i)
    sup_bound_ = std::max(sup_bound_, (*this)(grid_point(a_, b_, i, kSupBoundGrid)));
}

TargetDensity TargetDensity::from_function(Function eval, double a, double b) {
  return TargetDensity(std::move(eval), a, b);
}

TargetDensity TargetDensity::from_density(const PiecewisePolyDensity& f) {
  return TargetDensity([f](double x) { return f(x); }, f.a(), f.b());
}

TargetDensity TargetDensity::tabulated(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size()) fail(ErrorCode::DimensionMismatch, "table needs one value per abscissa");
  if (xs.size() < 2) fail(ErrorCode::EmptyInput, "table needs at least two points");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) fail(ErrorCode::InvalidInput, "table abscissae must be increasing");
  CompensatedSum mass;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!(ys[i] >= 0.0)) fail(ErrorCode::InvalidInput, "table values must be nonnegative");
    if (i > 0) mass.add(0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]));
  }
  if (!(mass.value() > 0.0)) fail(ErrorCode::ZeroMass, "table has zero mass");
  for (double& y : ys) y /= mass.value();
  const double a = xs.front();
  const double b = xs.back();
  return TargetDensity(
      [xs = std::move(xs), ys = std::move(ys)](double x) {
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin()) return ys.front();
        if (it == xs.end()) return ys.back();
        const auto j = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
        return (1.0 - w) * ys[j - 1] + w * ys[j];
      },
      a, b);
}

double TargetDensity::operator()(double x) const {
  if (x < a_ || x > b_) return 0.0;
  return eval_(x);
}

double silverman_bandwidth(std::span<const double> samples) {
  const auto n = static_cast<double>(samples.size());
  CompensatedSum s;
  for (double x : samples) s.add(x);
  const double mean = s.value() / n;
  CompensatedSum ss;
  for (double x : samples) ss.add((x - mean) * (x - mean));
  const double sd = std::sqrt(ss.value() / (n - 1.0));
  return 1.06 * sd * std::pow(n, -0.2);
}

TargetDensity kde_from_samples(std::span<const double> samples, std::optional<double> bandwidth) {
  if (samples.empty()) fail(ErrorCode::EmptyInput, "no samples given");
  for (double x : samples) {
    if (!std::isfinite(x)) fail(ErrorCode::InvalidInput, "sample is not finite");
    if (x < 1.0) fail(ErrorCode::InvalidInput, "samples must be >= 1; shift the data before estimating");
  }
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  if (samples.size() < 2 || *lo_it == *hi_it)
    fail(ErrorCode::DegenerateData, "samples are all equal");
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(samples);
  if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorCode::InvalidInput, "bandwidth must be positive");

  const double lo = std::max(1.0, *lo_it - 3.0 * h);
  const double hi = *hi_it + 3.0 * h;
  std::vector<double> xs(samples.begin(), samples.end());
  CompensatedSum mass;
  for (double x : xs) mass.add(std_normal_cdf((hi - x) / h) - std_normal_cdf((lo - x) / h));
  const double norm = mass.value() * h * std::sqrt(2.0 * std::numbers::pi);
  return TargetDensity::from_function(
      [xs = std::move(xs), h, norm](double x) {
        CompensatedSum s;
        for (double xi : xs) {
          const double z = (x - xi) / h;
          s.add(std::exp(-0.5 * z * z));
        }
        return s.value() / norm;
      },
      lo, hi);
}

Polynomial bernstein_fit(const TargetDensity& f, int degree) {
  if (degree > kMaxDegree)
    fail(ErrorCode::DegreeTooLarge, "Bernstein degree " + std::to_string(degree) + " exceeds cap " +
                                        std::to_string(kMaxDegree));
  if (degree < 1) fail(ErrorCode::PreconditionViolation, "Bernstein degree must be at least 1");
  std::vector<double> b(static_cast<std::size_t>(degree) + 1);
  for (int k = 0; k <= degree; ++k) b[k] = f(grid_point(f.a(), f.b(), k, degree));
  b.back() = f(f.b());
  return Polynomial::bernstein(std::move(b), f.a(), f.b());
}

Truncation truncate_renormalize(const Polynomial& p, double a, double b) {
  if (!(b > a)) fail(ErrorCode::InvalidInput, "support must satisfy a < b");
  std::vector<double> cuts{a};
  for (double x : real_roots(p, a, b)) cuts.push_back(x);
  cuts.push_back(b);

  // Keep only sign changes: neighbouring cells of equal sign are merged.
  std::vector<double> breaks{a};
  std::vector<bool> positive;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const bool pos = p(0.5 * (cuts[i] + cuts[i + 1])) > 0.0;
    if (!positive.empty() && positive.back() == pos) {
      breaks.back() = cuts[i + 1];
    } else {
      breaks.push_back(cuts[i + 1]);
      positive.push_back(pos);
    }
  }

  CompensatedSum mass;
  std::vector<Polynomial> pieces;
  for (std::size_t j = 0; j < positive.size(); ++j) {
    if (!positive[j]) {
      pieces.emplace_back();
      continue;
    }
    Polynomial piece = p.restricted(breaks[j], breaks[j + 1]);
    mass.add(piece.integrate(breaks[j], breaks[j + 1]));
    pieces.push_back(std::move(piece));
  }
  if (!(mass.value() > 0.0)) fail(ErrorCode::ZeroMass, "polynomial has no positive mass on the support");
  const double alpha = 1.0 / mass.value();
  for (auto& piece : pieces) piece = piece.scaled(alpha);
  return {PiecewisePolyDensity(std::move(breaks), std::move(pieces), true), alpha};
}

double certified_sup_error(const TargetDensity& f, const PiecewisePolyDensity& g, int grid_size) {
  if (grid_size < kMinCertificationGrid)
    fail(ErrorCode::PreconditionViolation,
         "certification grid must have at least " + std::to_string(kMinCertificationGrid) + " points");
  const auto& r = g.breakpoints();
  double worst = 0.0;
  for (std::size_t j = 0; j < g.piece_count(); ++j) {
    const Polynomial& p = g.pieces()[j];
    for (int i = 0; i < grid_size; ++i) {
      const double x = grid_point(r[j], r[j + 1], i, grid_size);
      worst = std::max(worst, std::abs(f(x) - p(x)));
    }
    worst = std::max(worst, std::abs(f(r[j + 1]) - p(r[j + 1])));
  }
  return worst;
}

double certified_sup_error(const TargetDensity& f, const Polynomial& p, double a, double b,
                           int grid_size) {
  return certified_sup_error(f, PiecewisePolyDensity({a, b}, {p}), grid_size);
}

namespace {

struct Candidate {
  Polynomial fit;
  std::optional<Truncation> truncation;
  double error;
};

Candidate evaluate_degree(const TargetDensity& f, int degree, int grid_size) {
  Candidate c{bernstein_fit(f, degree), std::nullopt, std::numeric_limits<double>::infinity()};
  try {
    c.truncation = truncate_renormalize(c.fit, f.a(), f.b());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroMass) throw;
    return c;
  }
  c.error = certified_sup_error(f, c.truncation->density, grid_size);
  return c;
}

ApproximationResult make_result(const TargetDensity& f, Candidate c, int degree, double epsilon,
                                int grid_size, std::vector<SearchTrial> trace) {
  if (!c.truncation) fail(ErrorCode::ZeroMass, "fit of degree " + std::to_string(degree) + " has no positive mass");
  const double raw = certified_sup_error(f, c.fit, f.a(), f.b(), grid_size);
  return ApproximationResult{std::move(c.truncation->density), degree, c.truncation->alpha, c.error,
                             epsilon, raw, std::move(trace)};
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    fail(ErrorCode::PreconditionViolation, "epsilon out of range: must lie in (0, 1)");
}

}  // namespace

ApproximationResult approximate_at(const TargetDensity& f, int degree, double epsilon, int grid_size) {
  check_epsilon(epsilon);
  Candidate c = evaluate_degree(f, degree, grid_size);
  std::vector<SearchTrial> trace{{degree, SearchPhase::Doubling, c.error, c.error < epsilon}};
  return make_result(f, std::move(c), degree, epsilon, grid_size, std::move(trace));
}

ApproximationResult degree_search(const TargetDensity& f, double epsilon, int grid_size) {
  check_epsilon(epsilon);
  std::vector<SearchTrial> trace;
  auto run = [&](int degree, SearchPhase phase) {
    Candidate c = evaluate_degree(f, degree, grid_size);
    trace.push_back({degree, phase, c.error, c.error < epsilon});
    return c;
  };

  int degree = 1;
  Candidate best = run(degree, SearchPhase::Doubling);
  while (!(best.error < epsilon)) {
    if (degree >= kMaxDegree) {
      std::ostringstream os;
      os << "no Bernstein degree up to " << kMaxDegree << " reaches sup error below " << epsilon
         << " (last " << best.error << ")";
      fail(ErrorCode::NoConvergence, os.str());
    }
    degree = std::min(2 * degree, kMaxDegree);
    best = run(degree, SearchPhase::Doubling);
  }

  // Invariant: `failing` fails, `passing` passes.
  int passing = degree;
  int failing = degree == 1 ? 0 : trace[trace.size() - 2].degree;
  while (passing - failing > 1) {
    const int mid = failing + (passing - failing) / 2;
    Candidate c = run(mid, SearchPhase::Bisection);
    if (c.error < epsilon) {
      passing = mid;
      best = std::move(c);
    } else {
      failing = mid;
    }
  }
  return make_result(f, std::move(best), passing, epsilon, grid_size, std::move(trace));
}

const char* to_string(SearchPhase phase) noexcept {
  return phase == SearchPhase::Doubling ? "doubling" : "bisection";
}

}  // namespace tailgame
