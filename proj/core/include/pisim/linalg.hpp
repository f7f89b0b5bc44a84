#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pisim {

using Complex = std::complex<double>;
using ComplexMat = Eigen::MatrixXcd;
using ComplexVec = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Numerical thresholds shared by every module.
///
/// `rank_rel` is a relative singular-value cutoff, `cluster_abs` the radius
/// used to merge computed eigenvalues, and `residual_abs` the acceptance
/// threshold for certificate residuals.
struct Tolerances {
  double rank_rel = 1e-9;
  double cluster_abs = 1e-7;
  double residual_abs = 1e-8;

  /// Throws InvalidInput unless 0 < rank_rel < 1 and the other two are > 0.
  void validate() const;
};

void require_finite(const ComplexMat& a, std::string_view what);
void require_square(const ComplexMat& a, std::string_view what);

/// Singular values in descending order; min(rows, cols) of them.
std::vector<double> singular_values(const ComplexMat& a);

/// Number of singular values above rank_rel * sigma_max. Zero for the zero matrix.
int rank_with_tol(const ComplexMat& a, const Tolerances& tol);

double spectral_norm(const ComplexMat& a);

/// sigma_max / sigma_min; +inf for singular input, 1 for the empty matrix.
double condition_number(const ComplexMat& a);

/// A = unitary * triangular * unitary^*.
struct SchurForm {
  ComplexMat unitary;
  ComplexMat triangular;
};

SchurForm schur_upper_triangularize(const ComplexMat& a, const Tolerances& tol);

/// Exchanges diagonal entries k and k+1 of a Schur form with one Givens
/// rotation, preserving unitary * triangular * unitary^*.
void swap_schur_adjacent(SchurForm& schur, Index k);

/// Permutes the diagonal of a Schur form: afterwards position i holds the
/// eigenvalue that was at position order[i].
void reorder_schur(SchurForm& schur, std::span<const Index> order);

/// X minimizing ||A X - B||_F (minimum-norm solution when rank deficient).
ComplexMat solve_least_squares(const ComplexMat& a, const ComplexMat& b);

/// Solves A X - X B = C for upper triangular A (m x m) and B (n x n).
/// Throws NumericalFailure when A and B share an eigenvalue.
ComplexMat solve_triangular_sylvester(const ComplexMat& a, const ComplexMat& b,
                                      const ComplexMat& c);

/// Inverse via partial-pivot LU; NumericalFailure if numerically singular.
ComplexMat inverse(const ComplexMat& a);

/// Block diagonal matrix with the given square or rectangular blocks.
ComplexMat direct_sum(std::span<const ComplexMat> blocks);

/// Orthonormal basis of the null space of A, using the same relative cutoff
/// as rank_with_tol. Columns are the right singular vectors of the smallest
/// singular values.
ComplexMat null_space(const ComplexMat& a, const Tolerances& tol);

}  // namespace pisim
