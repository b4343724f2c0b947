#include "tailgame/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tailgame/errors.hpp"

namespace tailgame {

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    carry_ += (sum_ - t) + v;
  } else {
    carry_ += (v - t) + sum_;
  }
  sum_ = t;
}

namespace {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double horner(std::span<const double> c, double x) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

double de_casteljau(std::span<const double> b, double t) {
  std::vector<double> w(b.begin(), b.end());
  const double s = 1.0 - t;
  for (std::size_t level = 1; level < w.size(); ++level) {
    for (std::size_t k = 0; k + level < w.size(); ++k) w[k] = s * w[k] + t * w[k + 1];
  }
  return w[0];
}

// Sum of b_k times the binomial(d, t) probability masses, walking outward from
// the mode. Dividing by the accumulated weight cancels the rounding error of
// the lgamma-based starting weight.
double bernstein_weighted_sum(std::span<const double> b, double t) {
  const int d = static_cast<int>(b.size()) - 1;
  const int mode = std::clamp(static_cast<int>(std::floor((d + 1) * t)), 0, d);
  const double log_w = log_binomial(d, mode) + mode * std::log(t) + (d - mode) * std::log1p(-t);
  const double w_mode = std::exp(log_w);
  const double ratio = t / (1.0 - t);
  constexpr double kCutoff = 1e-20;

  CompensatedSum value;
  CompensatedSum weight;
  value.add(b[mode] * w_mode);
  weight.add(w_mode);
  double w = w_mode;
  for (int k = mode; k < d; ++k) {
    w *= static_cast<double>(d - k) / (k + 1) * ratio;
    if (w < kCutoff * w_mode) break;
    value.add(b[k + 1] * w);
    weight.add(w);
  }
  w = w_mode;
  for (int k = mode; k > 0; --k) {
    w *= static_cast<double>(k) / (d - k + 1) / ratio;
    if (w < kCutoff * w_mode) break;
    value.add(b[k - 1] * w);
    weight.add(w);
  }
  return value.value() / weight.value();
}

double bernstein_eval(std::span<const double> b, double t) {
  const std::size_t d = b.size() - 1;
  if (d == 0) return b[0];
  if (t == 0.0) return b[0];
  if (t == 1.0) return b[d];
  if (d <= 64 || t < 0.0 || t > 1.0) return de_casteljau(b, t);
  return bernstein_weighted_sum(b, t);
}

// Splits Bernstein coefficients at t into the pieces on [0,t] and [t,1].
void de_casteljau_split(std::span<const double> b, double t, std::vector<double>& left,
                        std::vector<double>& right) {
  const std::size_t n = b.size();
  std::vector<double> w(b.begin(), b.end());
  left.assign(n, 0.0);
  right.assign(n, 0.0);
  left[0] = w[0];
  right[n - 1] = w[n - 1];
  const double s = 1.0 - t;
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t k = 0; k + level < n; ++k) w[k] = s * w[k] + t * w[k + 1];
    left[level] = w[0];
    right[n - 1 - level] = w[n - 1 - level];
  }
}

// Coefficients of p(from + h*u) in powers of u.
std::vector<double> taylor_shift(std::span<const double> c, double from, double h) {
  std::vector<double> r{c.back()};
  for (std::size_t j = c.size() - 1; j-- > 0;) {
    std::vector<double> next(r.size() + 1, 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      next[i] += r[i] * from;
      next[i + 1] += r[i] * h;
    }
    next[0] += c[j];
    r = std::move(next);
  }
  return r;
}

std::vector<double> poly_remainder(std::vector<double> num, std::span<const double> den) {
  const std::size_t dd = den.size() - 1;
  while (num.size() > dd) {
    const double q = num.back() / den.back();
    const std::size_t shift = num.size() - 1 - dd;
    for (std::size_t i = 0; i <= dd; ++i) num[shift + i] -= q * den[i];
    num.pop_back();
  }
  return num;
}

void normalize_max_abs(std::vector<double>& c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  if (m > 0.0)
    for (double& v : c) v /= m;
}

void trim(std::vector<double>& c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.empty()) c.push_back(0.0);
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

Polynomial::Polynomial(std::vector<double> monomial_coeffs)
    : basis_(Basis::Monomial), coeffs_(std::move(monomial_coeffs)) {
  normalize();
}

Polynomial::Polynomial(Basis basis, std::vector<double> coeffs, double lo, double hi)
    : basis_(basis), coeffs_(std::move(coeffs)), lo_(lo), hi_(hi) {
  normalize();
}

Polynomial Polynomial::bernstein(std::vector<double> coeffs, double lo, double hi) {
  if (!(hi > lo)) fail(ErrorCode::InvalidInput, "Bernstein interval must satisfy lo < hi");
  return Polynomial(Basis::Bernstein, std::move(coeffs), lo, hi);
}

void Polynomial::normalize() {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  if (static_cast<int>(coeffs_.size()) - 1 > kMaxDegree)
    fail(ErrorCode::DegreeTooLarge,
         "polynomial degree " + std::to_string(coeffs_.size() - 1) + " exceeds cap " +
             std::to_string(kMaxDegree));
  for (double c : coeffs_)
    if (!std::isfinite(c)) fail(ErrorCode::InvalidInput, "polynomial coefficient is not finite");
  if (is_zero()) {
    basis_ = Basis::Monomial;
    coeffs_.assign(1, 0.0);
    lo_ = hi_ = 0.0;
    return;
  }
  if (basis_ == Basis::Monomial) {
    trim(coeffs_);
    lo_ = hi_ = 0.0;
  }
}

bool Polynomial::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

double Polynomial::operator()(double x) const {
  if (basis_ == Basis::Monomial) return horner(coeffs_, x);
  return bernstein_eval(coeffs_, (x - lo_) / (hi_ - lo_));
}

Polynomial Polynomial::derivative(int k) const {
  if (k < 0) fail(ErrorCode::PreconditionViolation, "derivative order must be nonnegative");
  if (k == 0) return *this;
  if (k > degree()) return Polynomial();
  std::vector<double> c = coeffs_;
  if (basis_ == Basis::Monomial) {
    for (int step = 0; step < k; ++step) {
      for (std::size_t i = 1; i < c.size(); ++i) c[i - 1] = c[i] * static_cast<double>(i);
      c.pop_back();
    }
    return Polynomial(std::move(c));
  }
  const double h = hi_ - lo_;
  for (int step = 0; step < k; ++step) {
    const double d = static_cast<double>(c.size() - 1);
    for (std::size_t i = 0; i + 1 < c.size(); ++i) c[i] = d * (c[i + 1] - c[i]) / h;
    c.pop_back();
  }
  return Polynomial(Basis::Bernstein, std::move(c), lo_, hi_);
}

Polynomial Polynomial::antiderivative() const {
  if (basis_ == Basis::Monomial) {
    std::vector<double> c(coeffs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
    return Polynomial(std::move(c));
  }
  const double scale = (hi_ - lo_) / static_cast<double>(coeffs_.size());
  std::vector<double> c(coeffs_.size() + 1, 0.0);
  CompensatedSum running;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    running.add(coeffs_[k]);
    c[k + 1] = running.value() * scale;
  }
  return Polynomial(Basis::Bernstein, std::move(c), lo_, hi_);
}

double Polynomial::integrate(double from, double to) const {
  if (is_zero() || from == to) return 0.0;
  if (basis_ == Basis::Bernstein && from == lo_ && to == hi_) {
    CompensatedSum s;
    for (double c : coeffs_) s.add(c);
    return s.value() * (hi_ - lo_) / static_cast<double>(coeffs_.size());
  }
  const Polynomial anti = antiderivative();
  return anti(to) - anti(from);
}

Polynomial Polynomial::scaled(double factor) const {
  std::vector<double> c = coeffs_;
  for (double& v : c) v *= factor;
  return Polynomial(basis_, std::move(c), lo_, hi_);
}

Polynomial Polynomial::restricted(double from, double to) const {
  if (basis_ == Basis::Monomial) return *this;
  if (!(to > from)) fail(ErrorCode::InvalidInput, "restriction interval must satisfy from < to");
  if (from == lo_ && to == hi_) return *this;
  const double h = hi_ - lo_;
  std::vector<double> left, right, unused;
  // [lo, to] first, then the right part of that at `from`.
  de_casteljau_split(coeffs_, (to - lo_) / h, left, unused);
  de_casteljau_split(left, (from - lo_) / (to - lo_), unused, right);
  return Polynomial(Basis::Bernstein, std::move(right), from, to);
}

Polynomial Polynomial::to_monomial() const {
  if (basis_ == Basis::Monomial) return *this;
  const int d = degree();
  std::vector<double> power(d + 1, 0.0);
  for (int j = 0; j <= d; ++j) {
    CompensatedSum s;
    for (int k = 0; k <= j; ++k) {
      const double sign = ((j - k) % 2 == 0) ? 1.0 : -1.0;
      s.add(sign * std::exp(log_binomial(j, k)) * coeffs_[k]);
    }
    power[j] = std::exp(log_binomial(d, j)) * s.value();
  }
  // Compose with u = (x - lo) / h.
  const double alpha = 1.0 / (hi_ - lo_);
  const double beta = -lo_ / (hi_ - lo_);
  std::vector<double> r{power[d]};
  for (int j = d - 1; j >= 0; --j) {
    std::vector<double> next(r.size() + 1, 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      next[i] += r[i] * beta;
      next[i + 1] += r[i] * alpha;
    }
    next[0] += power[j];
    r = std::move(next);
  }
  return Polynomial(std::move(r));
}

Polynomial Polynomial::to_bernstein(double from, double to) const {
  if (!(to > from)) fail(ErrorCode::InvalidInput, "Bernstein interval must satisfy lo < hi");
  if (basis_ == Basis::Bernstein) return restricted(from, to);
  const std::vector<double> a = taylor_shift(coeffs_, from, to - from);
  const int d = static_cast<int>(a.size()) - 1;
  std::vector<double> b(d + 1, 0.0);
  for (int k = 0; k <= d; ++k) {
    CompensatedSum s;
    for (int j = 0; j <= k; ++j) s.add(std::exp(log_binomial(k, j) - log_binomial(d, j)) * a[j]);
    b[k] = s.value();
  }
  return Polynomial(Basis::Bernstein, std::move(b), from, to);
}

Polynomial Polynomial::elevated(int new_degree) const {
  if (basis_ == Basis::Monomial || new_degree <= degree()) return *this;
  std::vector<double> c = coeffs_;
  while (static_cast<int>(c.size()) - 1 < new_degree) {
    const double n = static_cast<double>(c.size());  // old degree + 1
    std::vector<double> next(c.size() + 1);
    next[0] = c[0];
    next[c.size()] = c.back();
    for (std::size_t k = 1; k < c.size(); ++k)
      next[k] = (k / n) * c[k - 1] + (1.0 - k / n) * c[k];
    c = std::move(next);
  }
  return Polynomial(Basis::Bernstein, std::move(c), lo_, hi_);
}

Polynomial Polynomial::flushed(double threshold) const {
  std::vector<double> c = coeffs_;
  for (double& v : c)
    if (std::abs(v) < threshold) v = 0.0;
  return Polynomial(basis_, std::move(c), lo_, hi_);
}

namespace {

Polynomial combine(const Polynomial& p, const Polynomial& q, double sign) {
  if (q.is_zero()) return p;
  if (p.is_zero()) return q.scaled(sign);
  if (p.basis() != q.basis() ||
      (p.is_bernstein() && (p.lo() != q.lo() || p.hi() != q.hi())))
    fail(ErrorCode::InvalidInput, "polynomials live in different representations");
  const int d = std::max(p.degree(), q.degree());
  const Polynomial pe = p.elevated(d);
  const Polynomial qe = q.elevated(d);
  std::vector<double> c(d + 1, 0.0);
  for (int i = 0; i <= pe.degree(); ++i) c[i] += pe.coeffs()[i];
  for (int i = 0; i <= qe.degree(); ++i) c[i] += sign * qe.coeffs()[i];
  if (p.is_bernstein()) return Polynomial::bernstein(std::move(c), p.lo(), p.hi());
  return Polynomial(std::move(c));
}

}  // namespace

Polynomial operator+(const Polynomial& p, const Polynomial& q) { return combine(p, q, 1.0); }
Polynomial operator-(const Polynomial& p, const Polynomial& q) { return combine(p, q, -1.0); }

double poly_eval(const Polynomial& p, double x) { return p(x); }
Polynomial poly_derivative(const Polynomial& p, int k) { return p.derivative(k); }

std::pair<Polynomial, Polynomial> align_on(const Polynomial& p, const Polynomial& q,
                                           double from, double to) {
  if (!p.is_bernstein() && !q.is_bernstein()) return {p, q};
  Polynomial pb = p.to_bernstein(from, to);
  Polynomial qb = q.to_bernstein(from, to);
  if (pb.is_zero()) pb = Polynomial::bernstein({0.0}, from, to);
  if (qb.is_zero()) qb = Polynomial::bernstein({0.0}, from, to);
  const int d = std::max(pb.degree(), qb.degree());
  return {pb.elevated(d), qb.elevated(d)};
}

double weighted_moment(const Polynomial& p, double from, double to, int n) {
  if (n < 0) fail(ErrorCode::PreconditionViolation, "moment order must be nonnegative");
  if (p.is_zero() || from == to) return 0.0;
  CompensatedSum s;
  if (!p.is_bernstein()) {
    const auto c = p.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0.0) continue;
      const int e = static_cast<int>(i) + n + 1;
      const double term = c[i] * (std::pow(to, e) - std::pow(from, e)) / e;
      if (!std::isfinite(term))
        fail(ErrorCode::OverflowError, "moment of order " + std::to_string(n) + " overflows");
      s.add(term);
    }
  } else {
    // Product of x^n (Bernstein coefficients lo^(n-i) hi^i) and p, integrated
    // termwise: every degree-(n+d) basis function integrates to h/(n+d+1).
    const Polynomial r = p.restricted(from, to);
    const auto b = r.coeffs();
    const int d = r.degree();
    std::vector<double> power(n + 1);
    std::vector<double> log_cn(n + 1);
    for (int i = 0; i <= n; ++i) {
      power[i] = std::pow(from, n - i) * std::pow(to, i);
      log_cn[i] = log_binomial(n, i);
    }
    std::vector<double> log_cd(d + 1);
    for (int j = 0; j <= d; ++j) log_cd[j] = log_binomial(d, j);
    std::vector<double> log_cnd(n + d + 1);
    for (int k = 0; k <= n + d; ++k) log_cnd[k] = log_binomial(n + d, k);
    for (int i = 0; i <= n; ++i) {
      if (!std::isfinite(power[i]))
        fail(ErrorCode::OverflowError, "moment of order " + std::to_string(n) + " overflows");
      for (int j = 0; j <= d; ++j) {
        if (b[j] == 0.0) continue;
        s.add(power[i] * b[j] * std::exp(log_cn[i] + log_cd[j] - log_cnd[i + j]));
      }
    }
    const double result = s.value() * (to - from) / (n + d + 1);
    if (!std::isfinite(result))
      fail(ErrorCode::OverflowError, "moment of order " + std::to_string(n) + " overflows");
    return result;
  }
  const double result = s.value();
  if (!std::isfinite(result))
    fail(ErrorCode::OverflowError, "moment of order " + std::to_string(n) + " overflows");
  return result;
}

// ---------------------------------------------------------------------------
// Root isolation

std::vector<Polynomial> sturm_chain(const Polynomial& p) {
  std::vector<Polynomial> chain;
  const Polynomial mono = p.to_monomial();
  std::vector<double> p0(mono.coeffs().begin(), mono.coeffs().end());
  normalize_max_abs(p0);
  chain.emplace_back(p0);
  if (chain.back().degree() == 0) return chain;
  const Polynomial deriv = chain.back().derivative();
  std::vector<double> p1(deriv.coeffs().begin(), deriv.coeffs().end());
  normalize_max_abs(p1);
  chain.emplace_back(p1);
  constexpr double kFlush = 1e-11;
  while (chain.back().degree() > 0) {
    const auto& a = chain[chain.size() - 2].coeffs();
    const auto& b = chain.back().coeffs();
    std::vector<double> r = poly_remainder(std::vector<double>(a.begin(), a.end()), b);
    for (double& v : r) v = -v;
    for (double& v : r)
      if (std::abs(v) < kFlush) v = 0.0;
    trim(r);
    if (r.size() == 1 && r[0] == 0.0) break;
    normalize_max_abs(r);
    chain.emplace_back(r);
  }
  return chain;
}

int sturm_variations(const std::vector<Polynomial>& chain, double x) {
  int changes = 0;
  int last = 0;
  for (const Polynomial& q : chain) {
    const int s = sign_of(q(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

namespace {

constexpr double kRootTolerance = 1e-12;

// Roots of q on the unit interval; `width` converts unit lengths to x units.
class SturmIsolator {
 public:
  SturmIsolator(const Polynomial& q, double width) : q_(q), chain_(sturm_chain(q)), width_(width) {}

  void isolate(double l, double r, std::vector<double>& out) {
    isolate(l, r, sturm_variations(chain_, l) - sturm_variations(chain_, r), out);
  }

 private:
  void isolate(double l, double r, int count, std::vector<double>& out) {
    if (count <= 0) return;
    if ((r - l) * width_ < kRootTolerance) {
      out.push_back(0.5 * (l + r));
      return;
    }
    if (count == 1) {
      out.push_back(refine(l, r));
      return;
    }
    const double m = 0.5 * (l + r);
    const int vm = sturm_variations(chain_, m);
    isolate(l, m, sturm_variations(chain_, l) - vm, out);
    isolate(m, r, vm - sturm_variations(chain_, r), out);
  }

  // Exactly one distinct root in (l, r].
  double refine(double l, double r) {
    const double fl = q_(l);
    const double fr = q_(r);
    if (fr == 0.0) return r;
    if (sign_of(fl) * sign_of(fr) < 0) {
      int sl = sign_of(fl);
      for (int it = 0; it < 200 && (r - l) * width_ >= kRootTolerance; ++it) {
        const double m = 0.5 * (l + r);
        const int sm = sign_of(q_(m));
        if (sm == 0) return m;
        if (sm == sl) {
          l = m;
        } else {
          r = m;
        }
      }
      return 0.5 * (l + r);
    }
    // Even multiplicity: follow the count.
    for (int it = 0; it < 200 && (r - l) * width_ >= kRootTolerance; ++it) {
      const double m = 0.5 * (l + r);
      if (sturm_variations(chain_, l) - sturm_variations(chain_, m) > 0) {
        r = m;
      } else {
        l = m;
      }
    }
    return 0.5 * (l + r);
  }

  Polynomial q_;
  std::vector<Polynomial> chain_;
  double width_;
};

int sign_variations(std::span<const double> b, double tiny) {
  int changes = 0;
  int last = 0;
  for (double v : b) {
    const int s = std::abs(v) <= tiny ? 0 : sign_of(v);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Subdivision on Bernstein coefficients over [l, r] in x units.
void bernstein_isolate(const std::vector<double>& b, double l, double r, double tiny, int depth,
                       std::vector<double>& out) {
  const int var = sign_variations(b, tiny);
  if (var == 0) return;
  if (r - l < kRootTolerance || depth > 80) {
    out.push_back(0.5 * (l + r));
    return;
  }
  const double b0 = std::abs(b.front()) <= tiny ? 0.0 : b.front();
  const double bd = std::abs(b.back()) <= tiny ? 0.0 : b.back();
  if (var == 1 && b0 != 0.0 && bd != 0.0) {
    const int s0 = sign_of(b0);
    double tl = 0.0;
    double tr = 1.0;
    for (int it = 0; it < 200 && (tr - tl) * (r - l) >= kRootTolerance; ++it) {
      const double tm = 0.5 * (tl + tr);
      const double v = bernstein_eval(b, tm);
      if (v == 0.0) {
        tl = tr = tm;
        break;
      }
      if (sign_of(v) == s0) {
        tl = tm;
      } else {
        tr = tm;
      }
    }
    out.push_back(l + 0.5 * (tl + tr) * (r - l));
    return;
  }
  std::vector<double> left, right;
  de_casteljau_split(b, 0.5, left, right);
  const double m = 0.5 * (l + r);
  if (std::abs(right.front()) <= tiny) out.push_back(m);
  bernstein_isolate(left, l, m, tiny, depth + 1, out);
  bernstein_isolate(right, m, r, tiny, depth + 1, out);
}

}  // namespace

std::vector<double> real_roots(const Polynomial& p, double from, double to) {
  if (!(to > from)) fail(ErrorCode::InvalidInput, "root interval must satisfy from < to");
  std::vector<double> roots;
  if (p.is_zero() || p.degree() == 0) return roots;

  if (!p.is_bernstein()) {
    const double h = to - from;
    std::vector<double> local = taylor_shift(p.coeffs(), from, h);
    normalize_max_abs(local);
    const Polynomial q(local);
    if (q.degree() == 0) return roots;
    SturmIsolator iso(q, h);
    std::vector<double> unit_roots;
    iso.isolate(0.0, 1.0, unit_roots);
    for (double u : unit_roots) roots.push_back(from + h * u);
  } else {
    const Polynomial local = p.to_bernstein(from, to);
    std::vector<double> b(local.coeffs().begin(), local.coeffs().end());
    double scale = 0.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    const double tiny = 8.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(b.size()) * scale;
    bernstein_isolate(b, from, to, tiny, 0, roots);
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> distinct;
  for (double x : roots) {
    if (x - from < kRootTolerance || to - x < kRootTolerance) continue;
    if (!distinct.empty() && x - distinct.back() < kRootTolerance) continue;
    distinct.push_back(x);
  }
  return distinct;
}

}  // namespace tailgame
