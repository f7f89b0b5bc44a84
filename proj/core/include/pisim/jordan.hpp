#pragma once

#include <vector>

#include "pisim/linalg.hpp"

namespace pisim {

/// One eigenvalue of a Jordan form together with its block sizes (descending).
struct JordanEigenBlocks {
  Complex eigenvalue;
  std::vector<int> sizes;

  int algebraic_multiplicity() const;
  int geometric_multiplicity() const { return static_cast<int>(sizes.size()); }
};

/// Complete similarity invariant of a square matrix.
///
/// Instances are always canonical: eigenvalues within `cluster_abs` of the
/// unit circle are snapped onto it, eigenvalues within `cluster_abs` of zero
/// become exactly zero, block sizes are sorted descending and eigenvalues are
/// ordered by descending modulus, then ascending argument in (-pi, pi].
class JordanSpec {
 public:
  JordanSpec() = default;

  /// Validates and canonicalizes. Throws InvalidInput on empty size lists,
  /// non-positive sizes, non-finite eigenvalues or two eigenvalues closer
  /// than cluster_abs.
  static JordanSpec canonical(std::vector<JordanEigenBlocks> blocks,
                              const Tolerances& tol = {});

  const std::vector<JordanEigenBlocks>& blocks() const { return blocks_; }
  int dimension() const { return dimension_; }
  bool empty() const { return blocks_.empty(); }

  /// Entry whose eigenvalue lies within `radius` of lambda, or nullptr.
  const JordanEigenBlocks* find(Complex lambda, double radius) const;

  /// Number of Jordan blocks at lambda (0 when lambda is not an eigenvalue).
  int block_count(Complex lambda, double radius) const;

  /// Same dimension and a bijection between eigenvalues within `radius`
  /// carrying identical block-size lists.
  bool equivalent(const JordanSpec& other, double radius) const;

 private:
  std::vector<JordanEigenBlocks> blocks_;
  int dimension_ = 0;
};

/// J_n(lambda): lambda on the diagonal, ones on the first superdiagonal.
ComplexMat jordan_block(int size, Complex lambda);

/// Direct sum of the spec's blocks in canonical order (eigenvalues in spec
/// order, sizes descending within each eigenvalue).
ComplexMat jordan_matrix(const JordanSpec& spec);

/// n - rank_with_tol(A - lambda I).
int nullity_at(const ComplexMat& a, Complex lambda, const Tolerances& tol);

/// Jordan structure plus the per-eigenvalue nullity sequences it came from.
struct JordanAnalysis {
  JordanSpec spec;
  /// nullity_sequences[i][k] = nullity((A - lambda_i I)^k), k = 0..index,
  /// aligned with spec.blocks().
  std::vector<std::vector<int>> nullity_sequences;
};

/// Clusters the Schur eigenvalues of A and recovers block sizes from the
/// staircase (Weyr) nullities of each cluster.
///
/// Computed eigenvalues within cluster_abs of each other always share a
/// cluster. Farther eigenvalues are merged only when the shifted diagonal
/// block of the reordered Schur form is numerically nilpotent at the
/// rank_rel * ||A||_2 cutoff, which is how a defective eigenvalue shows up
/// after rounding has split it into a ring of nearby values.
///
/// Throws ClusterAmbiguity when two final clusters lie within
/// 2 * cluster_abs, or when a cluster at radius cluster_abs is not
/// numerically a single eigenvalue. Throws NumericalFailure when a nullity
/// sequence is not concave.
JordanAnalysis jordan_analysis(const ComplexMat& a, const Tolerances& tol);

JordanSpec jordan_structure(const ComplexMat& a, const Tolerances& tol);

struct JordanTransform {
  ComplexMat transform;  ///< P with P^{-1} A P = jordan_matrix(spec)
  double cond = 1.0;
  double residual = 0.0;  ///< ||P^{-1} A P - J||_F
  double bound = 0.0;     ///< residual_abs * cond * (1 + ||A||_F)
};

/// Jordan basis of A laid out in the spec's canonical order.
/// Throws InvalidInput when `spec` is not the structure of A and
/// NumericalFailure when the achieved residual exceeds the bound.
JordanTransform jordan_transform(const ComplexMat& a, const JordanSpec& spec,
                                 const Tolerances& tol);

struct SimilarityCertificate {
  ComplexMat similarity;  ///< S with S A S^{-1} = B
  double cond = 1.0;
  double residual = 0.0;  ///< ||S A S^{-1} - B||_F
  double bound = 0.0;     ///< residual_abs * cond^2 * (1 + ||A||_F)
};

/// Similarity from A to B composed from their Jordan transforms.
/// Throws NotSimilar when the structures differ.
SimilarityCertificate similarity_between(const ComplexMat& a, const ComplexMat& b,
                                         const Tolerances& tol);

/// Same, with A's structure already known (skips one analysis).
SimilarityCertificate similarity_between(const ComplexMat& a, const JordanSpec& spec_a,
                                         const ComplexMat& b, const JordanSpec& spec_b,
                                         const Tolerances& tol);

}  // namespace pisim
