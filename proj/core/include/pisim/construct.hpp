#pragma once

#include <span>
#include <string>
#include <vector>

#include "pisim/decide.hpp"
#include "pisim/jordan.hpp"

namespace pisim {

struct EigenMultiplicity {
  Complex eigenvalue;
  int multiplicity = 0;
};

struct JordanBlockRef {
  Complex eigenvalue;
  int size = 0;
};

/// Distribution of an admissible Jordan form into direct summands of the
/// shape J_{n0}(0) + J_{n1}(l1) + ... + J_{nd}(ld) with distinct nonzero
/// l_i in the open disk, plus a diagonal unitary part.
struct BlockGrouping {
  struct Group {
    int zero_block_size = 0;
    std::vector<JordanBlockRef> nonzero_blocks;
  };
  std::vector<Group> groups;
  std::vector<EigenMultiplicity> unitary_part;
};

/// A partial isometry V similar to some input A, with the similarity S
/// (S A S^{-1} = V) and the residuals that certify it.
struct Certificate {
  ComplexMat target;
  ComplexMat similarity;
  double residual_similarity = 0.0;  ///< ||S A S^{-1} - V||_F
  double residual_variety = 0.0;     ///< ||V V^* V - V||_F
  double cond_S = 1.0;
};

/// Upper triangular partial isometry with diagonal (0, xi_1, ..., xi_{n-1}),
/// zero first column, orthonormal remaining columns and real positive first
/// superdiagonal. Throws InvalidInput if some |xi| >= 1.
ComplexMat superdiagonal_partial_isometry(std::span<const Complex> xis);

/// Deterministic grouping: unimodular eigenvalues are peeled off; every zero
/// block (descending size) opens one group; the blocks of each nonzero
/// interior eigenvalue, in canonical order and by descending size, go to
/// groups 0, 1, 2, ... Throws NotAdmissible when the spec fails the decision.
BlockGrouping partition_blocks(const JordanSpec& spec, const Tolerances& tol = {});

/// Direct sum of one superdiagonal partial isometry per group, with diagonal
/// (0 x n0, l1 x n1, ..., ld x nd), followed by diag(zeta_i I) for the
/// unitary part.
ComplexMat assemble_partial_isometry(const BlockGrouping& grouping);

/// Partial isometry with Jordan structure `spec`; the certificate's
/// similarity maps jordan_matrix(spec) onto it. Throws NumericalFailure when
/// that similarity is too ill-conditioned to form in double precision, which
/// happens for long blocks at eigenvalues close to each other or to zero.
Certificate synthesize_partial_isometry(const JordanSpec& spec, const Tolerances& tol);

/// End to end: decide A, synthesize a partial isometry and compose the
/// similarity with A's Jordan transform.
Certificate construct_similar_partial_isometry(const ComplexMat& a, const Tolerances& tol);

struct PeeledUnitary {
  std::vector<EigenMultiplicity> unitary_part;
  ComplexMat remainder;  ///< V22, upper triangular, no unimodular eigenvalues
  ComplexMat unitary;    ///< U with U^* V U = diag(zeta_i I) + V22
  double residual = 0.0;
};

/// Splits the unimodular eigenvalues off a partial isometry by a reordered
/// Schur form. Throws NotPartialIsometry when ||V V^* V - V||_F exceeds
/// residual_abs and NumericalFailure when the unimodular part does not
/// decouple within residual_abs * (1 + ||V||_F).
PeeledUnitary peel_unimodular(const ComplexMat& v, const Tolerances& tol);

/// ||X X^* X - X||_F.
double partial_isometry_residual(const ComplexMat& x);

/// Bound used for certificate similarity residuals:
/// residual_abs * cond_S^2 * (1 + ||A||_F).
double similarity_residual_bound(const ComplexMat& a, double cond_s, const Tolerances& tol);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct VerificationReport {
  bool passed = false;
  std::vector<CheckResult> checks;
};

/// Recomputes every certificate residual from V, S and the original A.
VerificationReport verify_certificate(const Certificate& cert, const ComplexMat& original,
                                      const Tolerances& tol);

}  // namespace pisim
