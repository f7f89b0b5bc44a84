#pragma once

// Reference computations used to check the library. None of them call into
// pisim's numerical routines: they use closed forms, exact rational
// arithmetic or direct evaluation of the defining inequalities.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pisim/jordan.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;
using IntMatrix = std::vector<std::vector<long long>>;

/// Singular values of a 2x2 matrix from the eigenvalues of A^* A:
/// s^2 = (t +- sqrt(t^2 - 4 |det A|^2)) / 2 with t = ||A||_F^2.
inline std::array<double, 2> singular_values_2x2(Complex a, Complex b, Complex c, Complex d) {
  const double t = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
  const double det2 = std::norm(a * d - b * c);
  const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det2));
  const double big = (t + disc) / 2.0;
  const double small = big > 0.0 ? det2 / big : 0.0;  // avoids cancellation
  return {std::sqrt(big), std::sqrt(small)};
}

/// Exact rank by rational Gaussian elimination.
inline int exact_rank(const IntMatrix& m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m[i][j];
  }
  int rank = 0;
  for (std::size_t col = 0; col < cols && static_cast<std::size_t>(rank) < rows; ++col) {
    std::size_t pivot = static_cast<std::size_t>(rank);
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[static_cast<std::size_t>(rank)]);
    const auto& prow = a[static_cast<std::size_t>(rank)];
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == static_cast<std::size_t>(rank) || a[i][col] == 0) continue;
      const Rational f = a[i][col] / prow[col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * prow[j];
    }
    ++rank;
  }
  return rank;
}

inline IntMatrix multiply(const IntMatrix& x, const IntMatrix& y) {
  const std::size_t n = x.size();
  const std::size_t k = y.size();
  const std::size_t m = y.front().size();
  IntMatrix out(n, std::vector<long long>(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      for (std::size_t j = 0; j < m; ++j) out[i][j] += x[i][l] * y[l][j];
    }
  }
  return out;
}

inline IntMatrix shifted(const IntMatrix& a, long long lambda) {
  IntMatrix out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i][i] -= lambda;
  return out;
}

/// nullity((A - lambda I)^k) for k = 0..n, exactly.
inline std::vector<int> exact_nullity_sequence(const IntMatrix& a, long long lambda) {
  const int n = static_cast<int>(a.size());
  IntMatrix identity(a.size(), std::vector<long long>(a.size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i) identity[i][i] = 1;
  const IntMatrix shift = shifted(a, lambda);
  std::vector<int> seq{0};
  IntMatrix power = identity;
  for (int k = 1; k <= n; ++k) {
    power = multiply(power, shift);
    seq.push_back(n - exact_rank(power));
  }
  return seq;
}

/// Jordan block sizes (descending) from a nullity sequence:
/// #(blocks of size >= k) = nullity_k - nullity_{k-1}.
inline std::vector<int> segre_from_nullities(const std::vector<int>& seq) {
  std::vector<int> at_least;
  for (std::size_t k = 1; k < seq.size(); ++k) at_least.push_back(seq[k] - seq[k - 1]);
  std::vector<int> sizes;
  for (std::size_t k = 0; k < at_least.size(); ++k) {
    const int next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
    for (int b = 0; b < at_least[k] - next; ++b) sizes.push_back(static_cast<int>(k) + 1);
  }
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

/// Determinant by cofactor expansion along the first row.
inline Complex cofactor_determinant(const std::vector<std::vector<Complex>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Complex det = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Complex>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Complex> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(std::move(row));
    }
    det += (c % 2 == 0 ? 1.0 : -1.0) * m[0][c] * cofactor_determinant(minor);
  }
  return det;
}

/// Weyl-Horn conditions evaluated literally on descending sigmas.
inline bool weyl_horn(std::vector<double> sigmas, std::vector<Complex> lambdas, double slack) {
  std::sort(sigmas.rbegin(), sigmas.rend());
  std::sort(lambdas.begin(), lambdas.end(),
            [](Complex x, Complex y) { return std::abs(x) > std::abs(y); });
  double ps = 1.0;
  double pl = 1.0;
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    ps *= sigmas[k];
    pl *= std::abs(lambdas[k]);
    if (k + 1 < sigmas.size() && ps < pl - slack) return false;
  }
  return std::abs(ps - pl) <= slack;
}

/// The three similarity-to-partial-isometry conditions read off a spec.
inline bool partial_isometry_conditions(const pisim::JordanSpec& spec, double eps) {
  int zero_blocks = 0;
  for (const auto& e : spec.blocks()) {
    if (std::abs(e.eigenvalue) <= eps) zero_blocks = static_cast<int>(e.sizes.size());
  }
  for (const auto& e : spec.blocks()) {
    const double r = std::abs(e.eigenvalue);
    if (r > 1.0 + eps) return false;
    if (std::abs(r - 1.0) <= eps) {
      if (std::any_of(e.sizes.begin(), e.sizes.end(), [](int s) { return s != 1; })) return false;
    } else if (r > eps && static_cast<int>(e.sizes.size()) > zero_blocks) {
      return false;
    }
  }
  return true;
}

/// The three projection-product conditions read off a spec.
inline bool projection_product_conditions(const pisim::JordanSpec& spec, double eps) {
  int zero_blocks = 0;
  int interior_blocks = 0;
  for (const auto& e : spec.blocks()) {
    const Complex z = e.eigenvalue;
    if (std::abs(z.imag()) > eps || z.real() < -eps || z.real() > 1.0 + eps) return false;
    if (std::any_of(e.sizes.begin(), e.sizes.end(), [](int s) { return s != 1; })) return false;
    if (std::abs(z) <= eps) {
      zero_blocks = static_cast<int>(e.sizes.size());
    } else if (z.real() < 1.0 - eps) {
      interior_blocks += static_cast<int>(e.sizes.size());
    }
  }
  return zero_blocks >= interior_blocks;
}

}  // namespace oracle
