#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tailgame/errors.hpp"
#include "tailgame/polynomial.hpp"

using namespace tailgame;

namespace {

int error_code_of(const auto& body) {
  try {
    body();
  } catch (const Error& e) {
    return static_cast<int>(e.code());
  }
  return -1;
}

}  // namespace

TEST_CASE("compensated sum recovers cancelled terms") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
}

TEST_CASE("monomial evaluation matches direct power sums") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(1 + trial % 8);
    for (double& v : c) v = coef(rng);
    c.back() = 1.0;
    const Polynomial p(c);
    for (double x : {1.0, 1.3, 1.77, 2.5}) CHECK(p(x) == doctest::Approx(oracle::monomial_direct(c, x)).epsilon(1e-13));
  }
}

TEST_CASE("trailing zeros are trimmed and zero is canonical") {
  const Polynomial p({1.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 1);
  CHECK(Polynomial({0.0, 0.0}).is_zero());
  CHECK(Polynomial::bernstein({0.0, 0.0, 0.0}, 1.0, 2.0) == Polynomial());
}

TEST_CASE("non-finite coefficients and degree cap") {
  CHECK(error_code_of([] { Polynomial({1.0, NAN}); }) == static_cast<int>(ErrorCode::InvalidInput));
  std::vector<double> big(kMaxDegree + 2, 1.0);
  CHECK(error_code_of([&] { Polynomial::bernstein(big, 1.0, 2.0); }) ==
        static_cast<int>(ErrorCode::DegreeTooLarge));
  big.pop_back();
  CHECK_NOTHROW(Polynomial::bernstein(big, 1.0, 2.0));
}

TEST_CASE("Bernstein evaluation matches the direct sum at moderate degree") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int n : {1, 3, 10, 40}) {
    std::vector<double> b(n + 1);
    for (double& v : b) v = coef(rng);
    const Polynomial p = Polynomial::bernstein(b, 1.0, 2.5);
    for (double x : {1.0, 1.1, 1.75, 2.2, 2.5})
      CHECK(p(x) == doctest::Approx(oracle::bernstein_direct(b, 1.0, 2.5, x)).epsilon(1e-12));
  }
}

TEST_CASE("linear precision of Bernstein polynomials holds at high degree") {
  for (int n : {100, 500, 2000, 4096}) {
    std::vector<double> b(n + 1);
    for (int k = 0; k <= n; ++k) b[k] = 1.0 + 1.5 * k / n;
    const Polynomial p = Polynomial::bernstein(b, 1.0, 2.5);
    for (double x : {1.0, 1.01, 1.5, 2.0, 2.4999, 2.5}) CHECK(p(x) == doctest::Approx(x).epsilon(1e-12));
    const Polynomial one = Polynomial::bernstein(std::vector<double>(n + 1, 1.0), 1.0, 2.5);
    CHECK(one(1.7) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("basis conversions round-trip") {
  const Polynomial p({-12.0, 18.0, -6.0});
  const Polynomial b = p.to_bernstein(1.0, 2.0);
  CHECK(b.is_bernstein());
  for (double x : {1.0, 1.2, 1.5, 2.0}) CHECK(b(x) == doctest::Approx(p(x)).epsilon(1e-13));
  const Polynomial back = b.to_monomial();
  REQUIRE(back.degree() == 2);
  for (int i = 0; i <= 2; ++i) CHECK(back.coeffs()[i] == doctest::Approx(p.coeffs()[i]).epsilon(1e-12));
}

TEST_CASE("restriction and elevation keep values") {
  const Polynomial p = Polynomial::bernstein({0.3, -0.2, 1.1, 0.4, 0.9}, 1.0, 2.0);
  const Polynomial r = p.restricted(1.25, 1.6);
  const Polynomial e = p.elevated(9);
  CHECK(e.degree() == 9);
  for (double x : {1.25, 1.3, 1.5, 1.6}) {
    CHECK(r(x) == doctest::Approx(p(x)).epsilon(1e-13));
    CHECK(e(x) == doctest::Approx(p(x)).epsilon(1e-13));
  }
}

TEST_CASE("derivative and antiderivative agree with finite differences and quadrature") {
  const Polynomial m({0.5, -1.0, 0.25, 0.125});
  const Polynomial b = Polynomial::bernstein({0.1, 0.7, -0.4, 0.2, 0.6}, 1.0, 2.0);
  for (const Polynomial& p : {m, b}) {
    const Polynomial d = p.derivative();
    for (double x : {1.2, 1.5, 1.8}) {
      const double h = 1e-5;
      CHECK(d(x) == doctest::Approx((p(x + h) - p(x - h)) / (2 * h)).epsilon(1e-7));
    }
    const double exact = oracle::quad([&](double x) { return p(x); }, 1.1, 1.9);
    CHECK(p.integrate(1.1, 1.9) == doctest::Approx(exact).epsilon(1e-13));
    const Polynomial anti = p.antiderivative();
    CHECK(anti.derivative()(1.37) == doctest::Approx(p(1.37)).epsilon(1e-13));
  }
  CHECK(m.derivative(4).is_zero());
}

TEST_CASE("weighted moments match quadrature") {
  const Polynomial m({0.5, -1.0, 0.25, 0.125});
  const Polynomial b = Polynomial::bernstein({0.1, 0.7, -0.4, 0.2, 0.6}, 1.0, 2.5);
  for (const Polynomial& p : {m, b}) {
    for (int n : {0, 1, 5, 20, 64}) {
      const double exact = oracle::quad([&](double x) { return std::pow(x, n) * p(x); }, 1.2, 2.5);
      CHECK(weighted_moment(p, 1.2, 2.5, n) == doctest::Approx(exact).epsilon(1e-11));
    }
  }
}

TEST_CASE("real roots of monomials") {
  // (x - 1.2)(x - 1.5)(x - 1.7)
  const Polynomial p({-3.06, 6.39, -4.4, 1.0});
  const auto r = real_roots(p, 1.0, 2.0);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r[2] == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(real_roots(p, 1.3, 1.6).size() == 1);
  CHECK(real_roots(Polynomial({1.0, 0.0, 1.0}), -5.0, 5.0).empty());
  CHECK(real_roots(Polynomial(), 1.0, 2.0).empty());
}

TEST_CASE("double roots are found") {
  // (x - 1.5)^2 (x - 1.1)
  const Polynomial p({-2.475, 5.55, -4.1, 1.0});
  const auto r = real_roots(p, 1.0, 2.0);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(1.5).epsilon(1e-9));
  const auto rb = real_roots(p.to_bernstein(1.0, 2.0), 1.0, 2.0);
  REQUIRE(rb.size() == 2);
  CHECK(rb[1] == doctest::Approx(1.5).epsilon(1e-7));
}

TEST_CASE("roots at the interval ends are excluded") {
  const Polynomial p({-2.0, 1.0});  // root at 2
  CHECK(real_roots(p, 1.0, 2.0).empty());
  CHECK(real_roots(p, 1.0, 3.0).size() == 1);
}

TEST_CASE("Bernstein root isolation on random sign patterns") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> b(2 + trial % 30);
    for (double& v : b) v = coef(rng);
    const Polynomial p = Polynomial::bernstein(b, 1.0, 2.5);
    const auto roots = real_roots(p, 1.0, 2.5);
    for (double x : roots) CHECK(std::abs(p(x)) < 1e-9);
    // Every sign change on a fine grid brackets a reported root.
    double prev = p(1.0);
    for (int i = 1; i <= 2000; ++i) {
      const double lo = 1.0 + 1.5 * (i - 1) / 2000;
      const double hi = 1.0 + 1.5 * i / 2000;
      const double v = p(hi);
      if (prev * v < 0.0) {
        const bool found = std::any_of(roots.begin(), roots.end(),
                                       [&](double x) { return x >= lo - 1e-9 && x <= hi + 1e-9; });
        CHECK(found);
      }
      prev = v;
    }
  }
}

TEST_CASE("Sturm chain counts roots") {
  const Polynomial p({-3.06, 6.39, -4.4, 1.0});
  const auto chain = sturm_chain(p);
  CHECK(sturm_variations(chain, 1.0) - sturm_variations(chain, 2.0) == 3);
  CHECK(sturm_variations(chain, 1.0) - sturm_variations(chain, 1.6) == 2);
}

TEST_CASE("align_on gives matching representations") {
  const Polynomial m({1.0, 2.0});
  const Polynomial b = Polynomial::bernstein({0.0, 1.0, 0.5}, 1.0, 3.0);
  const auto [pm, qm] = align_on(m, Polynomial({3.0}), 1.0, 2.0);
  CHECK_FALSE(pm.is_bernstein());
  const auto [p, q] = align_on(m, b, 1.5, 2.0);
  CHECK(p.is_bernstein());
  CHECK(q.is_bernstein());
  CHECK(p.degree() == q.degree());
  CHECK(p(1.7) == doctest::Approx(m(1.7)));
  CHECK(q(1.7) == doctest::Approx(b(1.7)));
  CHECK((p - q)(1.8) == doctest::Approx(m(1.8) - b(1.8)));
}

TEST_CASE("mixed-basis arithmetic is rejected") {
  const Polynomial m({1.0, 2.0});
  const Polynomial b = Polynomial::bernstein({0.0, 1.0}, 1.0, 2.0);
  CHECK(error_code_of([&] { (void)(m + b); }) == static_cast<int>(ErrorCode::InvalidInput));
}

TEST_CASE("flushing drops tiny coefficients") {
  const Polynomial p({1e-14, 1.0, 1e-13});
  const Polynomial f = p.flushed(1e-12);
  CHECK(f.degree() == 1);
  CHECK(f.coeffs()[0] == 0.0);
}
