#pragma once

#include <span>
#include <vector>

namespace tailgame {

/// Upper bound on the degree of any single piece.
inline constexpr int kMaxDegree = 4096;

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

enum class Basis { Monomial, Bernstein };

/// A real univariate polynomial.
///
/// Monomial polynomials hold c0..cd with value sum(ci * x^i) and are valid on
/// the whole real line. Bernstein polynomials hold b0..bd relative to a
/// reference interval [lo, hi]: value sum(bk * C(d,k) t^k (1-t)^(d-k)) with
/// t = (x - lo) / (hi - lo). The Bernstein form stays well conditioned at
/// degrees in the thousands, where monomial coefficients would overflow.
///
/// Monomial coefficients are trimmed so the trailing one is nonzero; the zero
/// polynomial is the monomial [0] in either basis.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> monomial_coeffs);

  static Polynomial bernstein(std::vector<double> coeffs, double lo, double hi);

  Basis basis() const noexcept { return basis_; }
  bool is_bernstein() const noexcept { return basis_ == Basis::Bernstein; }
  /// Reference interval of a Bernstein polynomial; both 0 for monomials.
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept;

  double operator()(double x) const;

  /// k-th derivative; degree < k gives the zero polynomial.
  Polynomial derivative(int k = 1) const;
  /// Antiderivative vanishing at 0 (monomial) or at lo (Bernstein).
  Polynomial antiderivative() const;
  /// Exact integral over [from, to].
  double integrate(double from, double to) const;

  Polynomial scaled(double factor) const;

  /// The same polynomial described on [from, to]. Monomials are returned as
  /// is; Bernstein coefficients are resubdivided by de Casteljau.
  Polynomial restricted(double from, double to) const;

  Polynomial to_monomial() const;
  Polynomial to_bernstein(double from, double to) const;
  /// Degree elevation of a Bernstein polynomial.
  Polynomial elevated(int new_degree) const;

  /// Coefficients with |c| < threshold replaced by zero.
  Polynomial flushed(double threshold) const;

  /// Sum and difference. Operands must share a basis and, for Bernstein, the
  /// reference interval; otherwise convert first.
  friend Polynomial operator+(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q);

  /// Bitwise equal representation.
  friend bool operator==(const Polynomial& p, const Polynomial& q) = default;

 private:
  Polynomial(Basis basis, std::vector<double> coeffs, double lo, double hi);
  void normalize();

  Basis basis_ = Basis::Monomial;
  std::vector<double> coeffs_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

double poly_eval(const Polynomial& p, double x);
Polynomial poly_derivative(const Polynomial& p, int k);

/// Brings p and q into a common representation valid on [from, to]: both
/// monomial when both are, otherwise both Bernstein on [from, to] with equal
/// degree.
std::pair<Polynomial, Polynomial> align_on(const Polynomial& p, const Polynomial& q,
                                           double from, double to);

/// Integral of x^n * p(x) over [from, to].
double weighted_moment(const Polynomial& p, double from, double to, int n);

/// Distinct real roots strictly inside (from, to), ascending, refined to
/// 1e-12. Monomial polynomials are isolated with Sturm sequences; Bernstein
/// polynomials by de Casteljau subdivision with the sign-variation bound.
/// The zero polynomial has no isolated roots and returns an empty list.
std::vector<double> real_roots(const Polynomial& p, double from, double to);

/// Number of sign changes in a Sturm chain evaluated at x (zeros skipped).
/// Exposed for tests.
int sturm_variations(const std::vector<Polynomial>& chain, double x);
std::vector<Polynomial> sturm_chain(const Polynomial& p);

}  // namespace tailgame
