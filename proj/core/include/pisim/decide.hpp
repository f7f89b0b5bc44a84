#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pisim/errors.hpp"
#include "pisim/jordan.hpp"

namespace pisim {

enum class ConditionId {
  // similarity to a partial isometry
  SpectrumInDisk,
  UnimodularDiagonalizable,
  ZeroNullityDominates,
  // similarity to a product of two orthogonal projections
  SpectrumInUnitInterval,
  Diagonalizable,
  NullitySumBound,
};

std::string_view to_string(ConditionId id);
ConditionId condition_id_from_string(std::string_view name);

struct ConditionReport {
  ConditionId id;
  bool passed = true;
  std::string detail;
  std::vector<Complex> eigenvalues;  ///< offending eigenvalues when !passed
};

struct Decision {
  bool verdict = true;
  std::vector<ConditionReport> conditions;
};

/// Raised by the constructive routines when the input fails a decision.
class NotAdmissible : public Error {
 public:
  NotAdmissible(const std::string& what, Decision decision)
      : Error(what), decision_(std::move(decision)) {}
  const Decision& decision() const { return decision_; }

 private:
  Decision decision_;
};

/// Whether a matrix with this Jordan structure is similar to a partial isometry:
/// (1) spectrum in the closed unit disk, (2) semisimple unimodular eigenvalues,
/// (3) #blocks(0) >= #blocks(lambda) for every lambda in the open disk.
Decision decide_partial_isometry(const JordanSpec& spec, const Tolerances& tol = {});

std::pair<Decision, JordanSpec> decide_matrix_partial_isometry(const ComplexMat& a,
                                                               const Tolerances& tol);

/// Whether a matrix with this Jordan structure is similar to a product of two
/// orthogonal projections: (a) real spectrum in [0, 1], (b) diagonalizable,
/// (c) #blocks(0) >= sum of #blocks(c) over eigenvalues c in (0, 1).
Decision decide_projection_product(const JordanSpec& spec, const Tolerances& tol = {});

/// Singular values, sorted descending and nonnegative.
class SingularProfile {
 public:
  /// Throws InvalidInput if the list is not descending or has a negative entry.
  explicit SingularProfile(std::vector<double> sigmas);

  /// r ones followed by n - r zeros: the profile of a rank-r partial isometry.
  static SingularProfile partial_isometry(int r, int n);

  const std::vector<double>& values() const { return sigmas_; }
  std::size_t size() const { return sigmas_.size(); }

 private:
  std::vector<double> sigmas_;
};

/// Weyl-Horn test: sigma_1..sigma_k >= |lambda_1..lambda_k| for k < n and
/// equality of the full products, with lambdas ordered by descending modulus.
/// Comparisons allow residual_abs relative slack.
bool weyl_horn_feasible(const SingularProfile& sigmas, std::span<const Complex> lambdas,
                        const Tolerances& tol = {});

/// Whether `lambdas` can be the spectrum of an n x n partial isometry of rank r.
bool pi_spectrum_feasible(std::span<const Complex> lambdas, int r, int n,
                          const Tolerances& tol = {});

}  // namespace pisim
