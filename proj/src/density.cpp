#include "tailgame/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tailgame/errors.hpp"

namespace tailgame {

namespace {

constexpr int kValidationGrid = 1024;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

PiecewisePolyDensity::PiecewisePolyDensity(std::vector<double> breakpoints,
                                           std::vector<Polynomial> pieces, bool continuous)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)), continuous_(continuous) {
  if (breakpoints_.size() < 2) fail(ErrorCode::InvalidInput, "density needs at least two breakpoints");
  if (pieces_.size() != breakpoints_.size() - 1)
    fail(ErrorCode::InvalidInput, "density needs exactly one piece per breakpoint interval");
  for (double r : breakpoints_)
    if (!std::isfinite(r)) fail(ErrorCode::InvalidInput, "breakpoint is not finite");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] > breakpoints_[i - 1]))
      fail(ErrorCode::InvalidInput, "breakpoints must be strictly increasing");
  if (breakpoints_.front() < 1.0)
    fail(ErrorCode::InvalidInput, "support must lie in [1, inf), got a = " + fmt(breakpoints_.front()));
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    Polynomial& p = pieces_[j];
    if (p.is_bernstein() && (p.lo() != breakpoints_[j] || p.hi() != breakpoints_[j + 1]))
      p = p.to_bernstein(breakpoints_[j], breakpoints_[j + 1]);
  }
}

PiecewisePolyDensity PiecewisePolyDensity::uniform(double a, double b) {
  return PiecewisePolyDensity({a, b}, {Polynomial({1.0 / (b - a)})}, true);
}

std::size_t PiecewisePolyDensity::piece_index(double x) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto j = static_cast<std::ptrdiff_t>(it - breakpoints_.begin()) - 1;
  return static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(pieces_.size()) - 1));
}

double PiecewisePolyDensity::operator()(double x) const {
  if (x < a() || x > b()) return 0.0;
  return pieces_[piece_index(x)](x);
}

PiecewisePolyDensity PiecewisePolyDensity::scaled(double factor) const {
  std::vector<Polynomial> pieces;
  pieces.reserve(pieces_.size());
  for (const auto& p : pieces_) pieces.push_back(p.scaled(factor));
  return PiecewisePolyDensity(breakpoints_, std::move(pieces), continuous_);
}

double piece_integral(const PiecewisePolyDensity& f, double lo, double hi) {
  if (!(lo >= f.a() && hi <= f.b() && lo <= hi))
    fail(ErrorCode::RangeError,
         "integration range [" + fmt(lo) + ", " + fmt(hi) + "] is not inside the support [" +
             fmt(f.a()) + ", " + fmt(f.b()) + "]");
  CompensatedSum total;
  const auto& r = f.breakpoints();
  for (std::size_t j = 0; j < f.piece_count(); ++j) {
    const double s = std::max(lo, r[j]);
    const double e = std::min(hi, r[j + 1]);
    if (e <= s) continue;
    total.add(f.pieces()[j].integrate(s, e));
  }
  return total.value();
}

double moment(const PiecewisePolyDensity& f, int n) {
  if (n < 1) fail(ErrorCode::PreconditionViolation, "moment order must be at least 1");
  CompensatedSum total;
  const auto& r = f.breakpoints();
  for (std::size_t j = 0; j < f.piece_count(); ++j)
    total.add(weighted_moment(f.pieces()[j], r[j], r[j + 1], n));
  const double m = total.value();
  if (!std::isfinite(m)) fail(ErrorCode::OverflowError, "moment of order " + std::to_string(n) + " overflows");
  return m;
}

MomentSequence moments(const PiecewisePolyDensity& f, int n_max) {
  if (n_max < 1) fail(ErrorCode::PreconditionViolation, "moment count must be at least 1");
  MomentSequence seq;
  seq.values.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) seq.values.push_back(moment(f, n));
  return seq;
}

ValidationReport validate(const PiecewisePolyDensity& f) {
  ValidationReport report;
  const auto& r = f.breakpoints();
  double min_value = f.pieces().front()(r.front());

  for (std::size_t j = 0; j < f.piece_count(); ++j) {
    const Polynomial& p = f.pieces()[j];
    const double lo = r[j];
    const double hi = r[j + 1];
    auto probe = [&](double x) {
      const double v = p(x);
      if (v < min_value) min_value = v;
    };
    probe(lo);
    probe(hi);
    for (int i = 1; i < kValidationGrid; ++i) probe(lo + (hi - lo) * (static_cast<double>(i) / kValidationGrid));

    // A Bernstein piece lies above its smallest coefficient, so interior
    // extrema only need locating when that bound is inconclusive.
    bool certified = false;
    if (p.is_bernstein()) {
      const auto c = p.coeffs();
      certified = *std::min_element(c.begin(), c.end()) >= -kNonnegativityTolerance;
    }
    if (!certified && p.degree() >= 2)
      for (double x : real_roots(p.derivative(), lo, hi)) probe(x);
  }
  report.min_value = min_value;
  if (min_value < -kNonnegativityTolerance) {
    report.valid = false;
    report.violations.push_back("density takes negative value " + fmt(min_value));
  }

  report.mass = piece_integral(f, f.a(), f.b());
  if (!std::isfinite(report.mass) || std::abs(report.mass - 1.0) > kMassTolerance) {
    report.valid = false;
    report.violations.push_back("total mass is " + fmt(report.mass) + ", expected 1");
  }

  if (f.continuous()) {
    for (std::size_t j = 1; j < f.piece_count(); ++j) {
      const double left = f.pieces()[j - 1](r[j]);
      const double right = f.pieces()[j](r[j]);
      if (std::abs(left - right) > kContinuityTolerance) {
        report.valid = false;
        report.violations.push_back("jump of " + fmt(right - left) + " at breakpoint " + fmt(r[j]));
      }
    }
  }
  return report;
}

bool same_support(const PiecewisePolyDensity& f, const PiecewisePolyDensity& g) {
  return std::abs(f.a() - g.a()) <= kBreakpointTolerance &&
         std::abs(f.b() - g.b()) <= kBreakpointTolerance;
}

std::vector<double> merge_breakpoints(std::span<const std::vector<double>> lists) {
  std::vector<double> all;
  for (const auto& l : lists) all.insert(all.end(), l.begin(), l.end());
  std::sort(all.begin(), all.end());
  std::vector<double> merged;
  for (double x : all)
    if (merged.empty() || x - merged.back() > kBreakpointTolerance) merged.push_back(x);
  // The support end keeps its exact value.
  if (!all.empty()) merged.back() = all.back();
  return merged;
}

PiecewisePolyDensity mix(std::span<const PiecewisePolyDensity> densities,
                         std::span<const double> weights) {
  if (densities.empty() || densities.size() != weights.size())
    fail(ErrorCode::DimensionMismatch, "mix needs one weight per density");
  std::vector<std::vector<double>> lists;
  bool any_bernstein = false;
  for (const auto& f : densities) {
    if (!same_support(f, densities.front()))
      fail(ErrorCode::SupportMismatch, "mixed densities must share their support");
    lists.push_back(f.breakpoints());
    for (const auto& p : f.pieces()) any_bernstein = any_bernstein || p.is_bernstein();
  }
  const std::vector<double> r = merge_breakpoints(lists);
  bool continuous = true;
  for (const auto& f : densities) continuous = continuous && f.continuous();

  std::vector<Polynomial> pieces;
  for (std::size_t j = 0; j + 1 < r.size(); ++j) {
    const double s = r[j];
    const double e = r[j + 1];
    const double mid = 0.5 * (s + e);
    Polynomial sum = any_bernstein ? Polynomial::bernstein({0.0}, s, e) : Polynomial();
    for (std::size_t i = 0; i < densities.size(); ++i) {
      if (weights[i] == 0.0) continue;
      const Polynomial& p = densities[i].pieces()[densities[i].piece_index(mid)];
      Polynomial term = p.scaled(weights[i]);
      if (any_bernstein && !term.is_zero()) term = term.to_bernstein(s, e);
      if (sum.is_zero()) {
        sum = term;
      } else if (!term.is_zero()) {
        auto [x, y] = align_on(sum, term, s, e);
        sum = x + y;
      }
    }
    pieces.push_back(std::move(sum));
  }
  return PiecewisePolyDensity(r, std::move(pieces), continuous);
}

}  // namespace tailgame
