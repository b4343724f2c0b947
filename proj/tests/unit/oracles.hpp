#pragma once

// Independent reference computations used by the tests.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>

namespace oracle {

inline std::string fixture(const std::string& name) {
  std::ifstream in(std::string(TAILGAME_FIXTURES) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture_path(const std::string& name) { return std::string(TAILGAME_FIXTURES) + "/" + name; }

/// Adaptive Gauss-Kronrod quadrature.
inline double quad(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

/// 40-point Gauss-Legendre rule, exact for polynomials of degree <= 79.
inline double gauss40(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 40>::integrate(f, a, b);
}

/// Direct Bernstein sum in long double.
inline double bernstein_direct(const std::vector<double>& b, double lo, double hi, double x) {
  const auto n = static_cast<unsigned>(b.size() - 1);
  const long double t = (static_cast<long double>(x) - lo) / (static_cast<long double>(hi) - lo);
  long double s = 0;
  for (unsigned k = 0; k <= n; ++k)
    s += b[k] * boost::math::binomial_coefficient<long double>(n, k) * std::pow(t, static_cast<long double>(k)) *
         std::pow(1 - t, static_cast<long double>(n - k));
  return static_cast<double>(s);
}

inline double monomial_direct(const std::vector<double>& c, double x) {
  long double s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * std::pow(static_cast<long double>(x), static_cast<long double>(i));
  return static_cast<double>(s);
}

using Wide = boost::multiprecision::cpp_bin_float_50;

/// Piece value at x in 50-digit arithmetic from the stored coefficients.
/// Monomial coefficients are taken as given; Bernstein ones on [lo, hi].
inline Wide piece_value_wide(std::span<const double> c, bool bernstein, double lo, double hi, double x) {
  const Wide wx(x);
  Wide s = 0;
  if (!bernstein) {
    Wide p = 1;
    for (double v : c) {
      s += Wide(v) * p;
      p *= wx;
    }
    return s;
  }
  const std::size_t n = c.size() - 1;
  const Wide t = (wx - Wide(lo)) / (Wide(hi) - Wide(lo));
  Wide binom = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    s += Wide(c[k]) * binom * pow(t, static_cast<int>(k)) * pow(1 - t, static_cast<int>(n - k));
    binom = binom * Wide(n - k) / Wide(k + 1);
  }
  return s;
}

using Mat = std::vector<std::vector<double>>;

/// Solves M z = r by Gaussian elimination with partial pivoting.
inline std::optional<std::vector<double>> solve_linear(Mat m, std::vector<double> r) {
  const std::size_t n = r.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(m[i][c]) > std::abs(m[p][c])) p = i;
    if (std::abs(m[p][c]) < 1e-12) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(r[p], r[c]);
    for (std::size_t i = c + 1; i < n; ++i) {
      const double f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
      r[i] -= f * r[c];
    }
  }
  std::vector<double> z(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = r[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * z[j];
    z[i] = s / m[i][i];
  }
  return z;
}

inline std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

/// Value of the zero-sum game (rows maximize) by support enumeration over
/// equal-size supports; the first equilibrium found is returned.
inline std::optional<double> value_by_support_enumeration(const Mat& a) {
  const std::size_t n = a.size();
  const std::size_t m = a[0].size();
  constexpr double tol = 1e-9;
  for (std::size_t k = 1; k <= std::min(n, m); ++k) {
    for (const auto& rs : subsets_of_size(n, k)) {
      for (const auto& cs : subsets_of_size(m, k)) {
        // Unknowns: x on rs (k), v. Equations: column payoffs on cs equal v, sum x = 1.
        Mat mx(k + 1, std::vector<double>(k + 1, 0.0));
        std::vector<double> rx(k + 1, 0.0);
        for (std::size_t e = 0; e < k; ++e) {
          for (std::size_t i = 0; i < k; ++i) mx[e][i] = a[rs[i]][cs[e]];
          mx[e][k] = -1.0;
        }
        for (std::size_t i = 0; i < k; ++i) mx[k][i] = 1.0;
        rx[k] = 1.0;
        Mat my(k + 1, std::vector<double>(k + 1, 0.0));
        std::vector<double> ry(k + 1, 0.0);
        for (std::size_t e = 0; e < k; ++e) {
          for (std::size_t j = 0; j < k; ++j) my[e][j] = a[rs[e]][cs[j]];
          my[e][k] = -1.0;
        }
        for (std::size_t j = 0; j < k; ++j) my[k][j] = 1.0;
        ry[k] = 1.0;
        const auto zx = solve_linear(mx, rx);
        const auto zy = solve_linear(my, ry);
        if (!zx || !zy) continue;
        std::vector<double> x(n, 0.0);
        std::vector<double> y(m, 0.0);
        bool ok = true;
        for (std::size_t i = 0; i < k; ++i) {
          if ((*zx)[i] < -tol || (*zy)[i] < -tol) ok = false;
          x[rs[i]] = (*zx)[i];
          y[cs[i]] = (*zy)[i];
        }
        if (!ok) continue;
        const double v = (*zx)[k];
        // Best-response checks: no row beats v against y, no column undercuts v against x.
        for (std::size_t i = 0; i < n && ok; ++i) {
          double s = 0;
          for (std::size_t j = 0; j < m; ++j) s += a[i][j] * y[j];
          if (s > v + 1e-8) ok = false;
        }
        for (std::size_t j = 0; j < m && ok; ++j) {
          double s = 0;
          for (std::size_t i = 0; i < n; ++i) s += x[i] * a[i][j];
          if (s < v - 1e-8) ok = false;
        }
        if (ok) return v;
      }
    }
  }
  return std::nullopt;
}

/// Lexicographic comparison of stage vectors (most significant first).
inline int lex_sign(const std::vector<double>& a, const std::vector<double>& b, double thr) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > thr) return a[k] < b[k] ? -1 : 1;
  }
  return 0;
}

}  // namespace oracle
