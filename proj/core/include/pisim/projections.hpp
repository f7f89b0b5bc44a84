#pragma once

#include <array>
#include <utility>
#include <vector>

#include "pisim/construct.hpp"
#include "pisim/jordan.hpp"

namespace pisim {

/// Halmos canonical data for a pair of orthogonal projections.
///
/// In canonical coordinates
///   P = I_{d1} + I_{d2} + 0_{d3} + 0_{d4} + sum_j [[1, 0], [0, 0]]
///   Q = I_{d1} + 0_{d2} + I_{d3} + 0_{d4} + sum_j [[c^2, cs], [cs, s^2]]
/// with s = sqrt(1 - c^2) and every angle parameter c strictly in (0, 1).
struct TwoProjectionForm {
  std::array<int, 4> d{0, 0, 0, 0};
  std::vector<double> angles;  ///< descending

  int dimension() const;
};

/// P and Q in canonical coordinates.
std::pair<ComplexMat, ComplexMat> assemble_two_projections(const TwoProjectionForm& form);

struct TwoProjectionDecomposition {
  TwoProjectionForm form;
  ComplexMat unitary;  ///< U^* P U and U^* Q U are the canonical matrices
};

/// Throws NotProjection unless P and Q are orthogonal projections within
/// residual_abs, and NumericalFailure when the recovered form does not
/// reproduce P and Q.
TwoProjectionDecomposition canonical_two_projections(const ComplexMat& p, const ComplexMat& q,
                                                     const Tolerances& tol);

/// A pair (P, Q) whose product realizes a Jordan form, with S J S^{-1} = PQ.
struct ProjectionCertificate {
  ComplexMat p;
  ComplexMat q;
  ComplexMat similarity;
  double residual_similarity = 0.0;  ///< ||S A S^{-1} - PQ||_F
  double residual_variety = 0.0;     ///< largest of ||P^2-P||, ||P-P^*||, ||Q^2-Q||, ||Q-Q^*||
  double cond_S = 1.0;
};

/// Canonical-coordinate projections for a spec passing
/// decide_projection_product: d1 = #blocks(1), one angle c = sqrt(lambda)
/// per block of each lambda in (0, 1), surplus zero blocks in d4.
ProjectionCertificate construct_projection_pair(const JordanSpec& spec, const Tolerances& tol);

/// Same for a matrix: the similarity maps A itself onto PQ.
ProjectionCertificate construct_projection_pair(const ComplexMat& a, const Tolerances& tol);

/// Largest of the four projection residuals of the pair.
double projection_pair_residual(const ComplexMat& p, const ComplexMat& q);

VerificationReport verify_projection_certificate(const ProjectionCertificate& cert,
                                                 const ComplexMat& original,
                                                 const Tolerances& tol);

/// X X^* X = X within residual_abs * (1 + ||X||_F^3).
bool in_variety_pi(const ComplexMat& x, const Tolerances& tol);

/// X X^* X = X^2 within residual_abs * (1 + ||X||_F^3).
bool in_variety_pp(const ComplexMat& x, const Tolerances& tol);

/// T T^* T has the same Jordan structure as T.
bool in_set_S(const ComplexMat& t, const Tolerances& tol);

}  // namespace pisim
