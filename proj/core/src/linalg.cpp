#include "pisim/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "pisim/errors.hpp"

namespace pisim {

void Tolerances::validate() const {
  if (!(rank_rel > 0.0 && rank_rel < 1.0)) {
    throw InvalidInput("rank_rel must lie in (0, 1)");
  }
  if (!(cluster_abs > 0.0) || !std::isfinite(cluster_abs)) {
    throw InvalidInput("cluster_abs must be positive");
  }
  if (!(residual_abs > 0.0) || !std::isfinite(residual_abs)) {
    throw InvalidInput("residual_abs must be positive");
  }
}

void require_finite(const ComplexMat& a, std::string_view what) {
  if (!a.allFinite()) {
    throw InvalidInput(std::string(what) + ": matrix has non-finite entries");
  }
}

void require_square(const ComplexMat& a, std::string_view what) {
  if (a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << what << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
    throw InvalidInput(msg.str());
  }
}

std::vector<double> singular_values(const ComplexMat& a) {
  require_finite(a, "singular_values");
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<ComplexMat> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

int rank_with_tol(const ComplexMat& a, const Tolerances& tol) {
  const auto s = singular_values(a);
  if (s.empty() || s.front() == 0.0) return 0;
  const double cutoff = tol.rank_rel * s.front();
  int r = 0;
  for (double v : s) {
    if (v > cutoff) ++r;
  }
  return r;
}

double spectral_norm(const ComplexMat& a) {
  const auto s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

double condition_number(const ComplexMat& a) {
  const auto s = singular_values(a);
  if (s.empty()) return 1.0;
  if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

SchurForm schur_upper_triangularize(const ComplexMat& a, const Tolerances& tol) {
  require_finite(a, "schur_upper_triangularize");
  require_square(a, "schur_upper_triangularize");
  const Index n = a.rows();
  if (n == 0) return {ComplexMat(0, 0), ComplexMat(0, 0)};

  Eigen::ComplexSchur<ComplexMat> schur(n);
  schur.compute(a, true);
  SchurForm out{schur.matrixU(), schur.matrixT()};
  out.triangular.triangularView<Eigen::StrictlyLower>().setZero();

  const double residual =
      (out.unitary * out.triangular * out.unitary.adjoint() - a).norm();
  if (schur.info() != Eigen::Success || !std::isfinite(residual) ||
      residual > tol.residual_abs * (1.0 + a.norm())) {
    std::ostringstream msg;
    msg << "Schur iteration failed (info=" << static_cast<int>(schur.info())
        << ", reconstruction residual " << residual << ")";
    throw NumericalFailure(msg.str());
  }
  return out;
}

void swap_schur_adjacent(SchurForm& schur, Index k) {
  ComplexMat& t = schur.triangular;
  const Index n = t.rows();
  if (k < 0 || k + 1 >= n) throw InvalidInput("swap_schur_adjacent: index out of range");

  const Complex t11 = t(k, k);
  const Complex t22 = t(k + 1, k + 1);
  const Complex t12 = t(k, k + 1);
  // Unit eigenvector of the 2x2 block for t22 becomes the first basis vector.
  Complex v1 = t12;
  Complex v2 = t22 - t11;
  const double len = std::hypot(std::abs(v1), std::abs(v2));
  if (len == 0.0) return;  // identical eigenvalues, nothing to exchange
  v1 /= len;
  v2 /= len;

  Eigen::Matrix2cd g;
  g << v1, -std::conj(v2), v2, std::conj(v1);

  t.block(k, 0, 2, n) = g.adjoint() * t.block(k, 0, 2, n);
  t.block(0, k, n, 2) = t.block(0, k, n, 2) * g;
  schur.unitary.block(0, k, schur.unitary.rows(), 2) =
      schur.unitary.block(0, k, schur.unitary.rows(), 2) * g;

  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
  t(k + 1, k) = 0.0;
}

void reorder_schur(SchurForm& schur, std::span<const Index> order) {
  const Index n = schur.triangular.rows();
  if (static_cast<Index>(order.size()) != n) {
    throw InvalidInput("reorder_schur: order has wrong length");
  }
  std::vector<Index> labels(static_cast<std::size_t>(n));
  std::iota(labels.begin(), labels.end(), Index{0});
  for (Index i = 0; i < n; ++i) {
    Index p = i;
    while (p < n && labels[p] != order[i]) ++p;
    if (p == n) throw InvalidInput("reorder_schur: order is not a permutation");
    for (Index q = p; q > i; --q) {
      swap_schur_adjacent(schur, q - 1);
      std::swap(labels[q - 1], labels[q]);
    }
  }
}

ComplexMat solve_least_squares(const ComplexMat& a, const ComplexMat& b) {
  require_finite(a, "solve_least_squares");
  require_finite(b, "solve_least_squares");
  if (a.rows() != b.rows()) {
    throw InvalidInput("solve_least_squares: A and B have different row counts");
  }
  if (a.cols() == 0) return ComplexMat(0, b.cols());
  Eigen::CompleteOrthogonalDecomposition<ComplexMat> cod(a);
  return cod.solve(b);
}

ComplexMat solve_triangular_sylvester(const ComplexMat& a, const ComplexMat& b,
                                      const ComplexMat& c) {
  const Index m = a.rows();
  const Index n = b.rows();
  if (a.cols() != m || b.cols() != n || c.rows() != m || c.cols() != n) {
    throw InvalidInput("solve_triangular_sylvester: shape mismatch");
  }
  ComplexMat x(m, n);
  for (Index j = 0; j < n; ++j) {
    ComplexVec rhs = c.col(j);
    for (Index k = 0; k < j; ++k) rhs += b(k, j) * x.col(k);
    ComplexMat shifted = a;
    shifted.diagonal().array() -= b(j, j);
    for (Index i = 0; i < m; ++i) {
      if (shifted(i, i) == Complex{}) {
        throw NumericalFailure("solve_triangular_sylvester: spectra intersect");
      }
    }
    x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  if (!x.allFinite()) throw NumericalFailure("solve_triangular_sylvester: overflow");
  return x;
}

ComplexMat inverse(const ComplexMat& a) {
  require_square(a, "inverse");
  if (a.rows() == 0) return a;
  Eigen::PartialPivLU<ComplexMat> lu(a);
  if (!(lu.rcond() > std::numeric_limits<double>::epsilon())) {
    throw NumericalFailure("inverse: matrix is numerically singular");
  }
  ComplexMat inv = lu.inverse();
  if (!inv.allFinite()) throw NumericalFailure("inverse: overflow");
  return inv;
}

ComplexMat direct_sum(std::span<const ComplexMat> blocks) {
  Index rows = 0;
  Index cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  ComplexMat out = ComplexMat::Zero(rows, cols);
  Index r = 0;
  Index c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

ComplexMat null_space(const ComplexMat& a, const Tolerances& tol) {
  require_finite(a, "null_space");
  const Index n = a.cols();
  if (a.rows() == 0 || n == 0) return ComplexMat::Identity(n, n);
  Eigen::JacobiSVD<ComplexMat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Index r = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    for (Index i = 0; i < s.size(); ++i) {
      if (s(i) > tol.rank_rel * s(0)) ++r;
    }
  }
  return svd.matrixV().rightCols(n - r);
}

}  // namespace pisim
