#include "pisim/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/QR>

namespace pisim {

double partial_isometry_residual(const ComplexMat& x) {
  return (x * x.adjoint() * x - x).norm();
}

double similarity_residual_bound(const ComplexMat& a, double cond_s, const Tolerances& tol) {
  return tol.residual_abs * cond_s * cond_s * (1.0 + a.norm());
}

ComplexMat superdiagonal_partial_isometry(std::span<const Complex> xis) {
  for (Complex xi : xis) {
    if (!(std::abs(xi) < 1.0)) {
      std::ostringstream msg;
      msg << "superdiagonal_partial_isometry: |xi| must be < 1, got " << xi;
      throw InvalidInput(msg.str());
    }
  }
  const Index n = static_cast<Index>(xis.size()) + 1;
  ComplexMat v = ComplexMat::Zero(n, n);
  for (Index k = 1; k < n; ++k) {
    const Complex xi = xis[static_cast<std::size_t>(k - 1)];
    // Unit vector in C^k orthogonal to the k - 1 columns already placed.
    ComplexVec u;
    if (k == 1) {
      u = ComplexVec::Ones(1);
    } else {
      Eigen::HouseholderQR<ComplexMat> qr(v.block(0, 1, k, k - 1));
      const ComplexMat q = qr.householderQ() * ComplexMat::Identity(k, k);
      u = q.col(k - 1);
    }
    const double pivot = std::abs(u(k - 1));
    if (pivot == 0.0) {
      throw NumericalFailure("superdiagonal_partial_isometry: vanishing superdiagonal entry");
    }
    u *= std::conj(u(k - 1)) / pivot;
    u(k - 1) = Complex{std::abs(u(k - 1)), 0.0};
    v.block(0, k, k, 1) = std::sqrt(1.0 - std::norm(xi)) * u;
    v(k, k) = xi;
  }
  return v;
}

BlockGrouping partition_blocks(const JordanSpec& spec, const Tolerances& tol) {
  Decision decision = decide_partial_isometry(spec, tol);
  if (!decision.verdict) {
    throw NotAdmissible("Jordan form is not that of a matrix similar to a partial isometry",
                        std::move(decision));
  }
  const double radius = tol.cluster_abs;
  BlockGrouping out;
  if (const auto* zero = spec.find(Complex{}, radius)) {
    for (int s : zero->sizes) out.groups.push_back({s, {}});
  }
  for (const auto& entry : spec.blocks()) {
    const double r = std::abs(entry.eigenvalue);
    if (r <= radius) continue;
    if (std::abs(r - 1.0) <= radius) {
      out.unitary_part.push_back({entry.eigenvalue, entry.algebraic_multiplicity()});
      continue;
    }
    for (std::size_t b = 0; b < entry.sizes.size(); ++b) {
      out.groups[b].nonzero_blocks.push_back({entry.eigenvalue, entry.sizes[b]});
    }
  }
  return out;
}

ComplexMat assemble_partial_isometry(const BlockGrouping& grouping) {
  std::vector<ComplexMat> parts;
  for (const auto& group : grouping.groups) {
    std::vector<Complex> xis(static_cast<std::size_t>(group.zero_block_size - 1), Complex{});
    for (const auto& block : group.nonzero_blocks) {
      xis.insert(xis.end(), static_cast<std::size_t>(block.size), block.eigenvalue);
    }
    parts.push_back(superdiagonal_partial_isometry(xis));
  }
  for (const auto& [zeta, m] : grouping.unitary_part) {
    parts.push_back(ComplexVec::Constant(m, zeta).asDiagonal());
  }
  return direct_sum(parts);
}

Certificate synthesize_partial_isometry(const JordanSpec& spec, const Tolerances& tol) {
  tol.validate();
  const BlockGrouping grouping = partition_blocks(spec, tol);

  Certificate cert;
  cert.target = assemble_partial_isometry(grouping);
  cert.residual_variety = partial_isometry_residual(cert.target);
  if (!(cert.residual_variety <= tol.residual_abs)) {
    std::ostringstream msg;
    msg << "synthesize_partial_isometry: ||VV*V - V|| = " << cert.residual_variety;
    throw NumericalFailure(msg.str());
  }

  const ComplexMat j = jordan_matrix(spec);
  const JordanSpec recovered = jordan_structure(cert.target, tol);
  SimilarityCertificate sim;
  try {
    sim = similarity_between(j, spec, cert.target, recovered, tol);
  } catch (const NotSimilar&) {
    throw NumericalFailure(
        "synthesize_partial_isometry: constructed matrix has a different Jordan structure");
  }
  cert.similarity = std::move(sim.similarity);
  cert.residual_similarity = sim.residual;
  cert.cond_S = sim.cond;
  return cert;
}

Certificate construct_similar_partial_isometry(const ComplexMat& a, const Tolerances& tol) {
  auto [decision, spec] = decide_matrix_partial_isometry(a, tol);
  if (!decision.verdict) {
    throw NotAdmissible("matrix is not similar to a partial isometry", std::move(decision));
  }
  Certificate cert = synthesize_partial_isometry(spec, tol);
  const JordanTransform pa = jordan_transform(a, spec, tol);

  cert.similarity = cert.similarity * inverse(pa.transform);
  cert.cond_S = condition_number(cert.similarity);
  cert.residual_similarity =
      (cert.similarity * a * inverse(cert.similarity) - cert.target).norm();
  const double bound = similarity_residual_bound(a, cert.cond_S, tol);
  if (!(cert.residual_similarity <= bound)) {
    std::ostringstream msg;
    msg << "construct_similar_partial_isometry: residual " << cert.residual_similarity
        << " exceeds bound " << bound;
    throw NumericalFailure(msg.str());
  }
  return cert;
}

PeeledUnitary peel_unimodular(const ComplexMat& v, const Tolerances& tol) {
  tol.validate();
  require_finite(v, "peel_unimodular");
  require_square(v, "peel_unimodular");
  const double pi_residual = partial_isometry_residual(v);
  if (!(pi_residual <= tol.residual_abs)) {
    std::ostringstream msg;
    msg << "peel_unimodular: ||VV*V - V||_F = " << pi_residual << " exceeds " << tol.residual_abs;
    throw NotPartialIsometry(msg.str());
  }

  SchurForm schur = schur_upper_triangularize(v, tol);
  const Index n = v.rows();
  const ComplexVec eig = schur.triangular.diagonal();

  // Single-linkage clusters of the unimodular diagonal entries.
  std::vector<Index> unimodular;
  std::vector<Index> rest;
  for (Index i = 0; i < n; ++i) {
    (std::abs(std::abs(eig(i)) - 1.0) <= tol.cluster_abs ? unimodular : rest).push_back(i);
  }
  std::vector<std::vector<Index>> clusters;
  for (Index i : unimodular) {
    std::vector<std::size_t> touching;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      for (Index j : clusters[c]) {
        if (std::abs(eig(i) - eig(j)) <= tol.cluster_abs) {
          touching.push_back(c);
          break;
        }
      }
    }
    std::vector<Index> merged{i};
    for (auto it = touching.rbegin(); it != touching.rend(); ++it) {
      merged.insert(merged.end(), clusters[*it].begin(), clusters[*it].end());
      clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(*it));
    }
    std::sort(merged.begin(), merged.end());
    clusters.push_back(std::move(merged));
  }

  std::vector<JordanEigenBlocks> entries;
  for (const auto& c : clusters) {
    Complex mean{};
    for (Index i : c) mean += eig(i);
    mean /= static_cast<double>(c.size());
    entries.push_back({mean / std::abs(mean), std::vector<int>(c.size(), 1)});
  }
  // Canonical order of the unimodular eigenvalues, reusing the spec ordering.
  std::vector<Index> order;
  PeeledUnitary out;
  if (!entries.empty()) {
    const JordanSpec ordered = JordanSpec::canonical(entries, tol);
    for (const auto& e : ordered.blocks()) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < entries.size(); ++c) {
        if (std::abs(entries[c].eigenvalue - e.eigenvalue) <
            std::abs(entries[best].eigenvalue - e.eigenvalue)) {
          best = c;
        }
      }
      order.insert(order.end(), clusters[best].begin(), clusters[best].end());
      out.unitary_part.push_back({e.eigenvalue, e.algebraic_multiplicity()});
    }
  }
  const Index m = static_cast<Index>(order.size());
  order.insert(order.end(), rest.begin(), rest.end());
  reorder_schur(schur, order);

  ComplexVec expected(m);
  Index pos = 0;
  for (const auto& [zeta, mult] : out.unitary_part) {
    expected.segment(pos, mult).setConstant(zeta);
    pos += mult;
  }
  const ComplexMat& t = schur.triangular;
  const ComplexMat d = expected.asDiagonal();
  const double coupling = (t.topLeftCorner(m, m) - d).squaredNorm() +
                          t.topRightCorner(m, n - m).squaredNorm();
  out.residual = std::sqrt(coupling);
  if (!(out.residual <= tol.residual_abs * (1.0 + v.norm()))) {
    std::ostringstream msg;
    msg << "peel_unimodular: unimodular part does not decouple (residual " << out.residual << ")";
    throw NumericalFailure(msg.str());
  }
  out.remainder = t.bottomRightCorner(n - m, n - m);
  out.unitary = schur.unitary;
  return out;
}

VerificationReport verify_certificate(const Certificate& cert, const ComplexMat& original,
                                      const Tolerances& tol) {
  VerificationReport report;
  const Index n = original.rows();
  const bool shapes_ok = original.cols() == n && cert.target.rows() == n &&
                         cert.target.cols() == n && cert.similarity.rows() == n &&
                         cert.similarity.cols() == n && original.allFinite() &&
                         cert.target.allFinite() && cert.similarity.allFinite();
  report.checks.push_back({"shapes", shapes_ok ? 0.0 : 1.0, 0.0, shapes_ok});
  if (!shapes_ok) return report;

  const double variety = partial_isometry_residual(cert.target);
  report.checks.push_back({"residual_variety", variety, tol.residual_abs, variety <= tol.residual_abs});

  const double cond = condition_number(cert.similarity);
  double residual = std::numeric_limits<double>::infinity();
  try {
    residual = (cert.similarity * original * inverse(cert.similarity) - cert.target).norm();
  } catch (const NumericalFailure&) {
  }
  const double bound = std::isfinite(cond) ? similarity_residual_bound(original, cond, tol)
                                           : 0.0;
  report.checks.push_back({"residual_similarity", residual, bound,
                           std::isfinite(residual) && residual <= bound});

  report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const CheckResult& c) { return c.passed; });
  return report;
}

}  // namespace pisim
