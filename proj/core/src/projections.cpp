#include "pisim/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace pisim {
namespace {

double projection_residual(const ComplexMat& p) {
  return std::max((p * p - p).norm(), (p - p.adjoint()).norm());
}

void require_projection(const ComplexMat& p, std::string_view name, const Tolerances& tol) {
  require_finite(p, name);
  require_square(p, name);
  const double r = projection_residual(p);
  if (!(r <= tol.residual_abs)) {
    std::ostringstream msg;
    msg << name << " is not an orthogonal projection (residual " << r << ")";
    throw NotProjection(msg.str());
  }
}

// Orthonormal basis of the complement of range(w) inside C^m, w with
// orthonormal columns.
ComplexMat orthonormal_complement(const ComplexMat& w) {
  const Index m = w.rows();
  if (w.cols() == 0) return ComplexMat::Identity(m, m);
  Eigen::HouseholderQR<ComplexMat> qr(w);
  const ComplexMat q = qr.householderQ() * ComplexMat::Identity(m, m);
  return q.rightCols(m - w.cols());
}

struct Generic {
  double c;
  ComplexVec x;
};

}  // namespace

int TwoProjectionForm::dimension() const {
  return d[0] + d[1] + d[2] + d[3] + 2 * static_cast<int>(angles.size());
}

std::pair<ComplexMat, ComplexMat> assemble_two_projections(const TwoProjectionForm& form) {
  for (int di : form.d) {
    if (di < 0) throw InvalidInput("TwoProjectionForm: negative corner dimension");
  }
  for (double c : form.angles) {
    if (!(c > 0.0 && c < 1.0)) throw InvalidInput("TwoProjectionForm: angles must lie in (0, 1)");
  }
  const Index n = form.dimension();
  ComplexMat p = ComplexMat::Zero(n, n);
  ComplexMat q = ComplexMat::Zero(n, n);
  const auto [d1, d2, d3, d4] = form.d;
  for (Index i = 0; i < d1; ++i) p(i, i) = q(i, i) = 1.0;
  for (Index i = d1; i < d1 + d2; ++i) p(i, i) = 1.0;
  for (Index i = d1 + d2; i < d1 + d2 + d3; ++i) q(i, i) = 1.0;
  Index pos = d1 + d2 + d3 + d4;
  for (double c : form.angles) {
    const double s = std::sqrt(1.0 - c * c);
    p(pos, pos) = 1.0;
    q(pos, pos) = c * c;
    q(pos, pos + 1) = q(pos + 1, pos) = c * s;
    q(pos + 1, pos + 1) = s * s;
    pos += 2;
  }
  return {p, q};
}

TwoProjectionDecomposition canonical_two_projections(const ComplexMat& p, const ComplexMat& q,
                                                     const Tolerances& tol) {
  tol.validate();
  require_projection(p, "P", tol);
  require_projection(q, "Q", tol);
  if (p.rows() != q.rows()) throw InvalidInput("canonical_two_projections: size mismatch");
  const Index n = p.rows();
  const ComplexMat ph = (p + p.adjoint()) / 2.0;
  const ComplexMat qh = (q + q.adjoint()) / 2.0;

  Eigen::SelfAdjointEigenSolver<ComplexMat> p_eig(ph);
  std::vector<Index> range_cols;
  std::vector<Index> kernel_cols;
  for (Index i = 0; i < n; ++i) {
    (p_eig.eigenvalues()(i) > 0.5 ? range_cols : kernel_cols).push_back(i);
  }
  const ComplexMat range_p = p_eig.eigenvectors()(Eigen::all, range_cols);
  const ComplexMat kernel_p = p_eig.eigenvectors()(Eigen::all, kernel_cols);

  // Q compressed to range P: eigenvalue c^2 per canonical direction.
  std::vector<ComplexVec> corner1;
  std::vector<ComplexVec> corner2;
  std::vector<Generic> generic;
  if (range_p.cols() > 0) {
    Eigen::SelfAdjointEigenSolver<ComplexMat> h_eig(range_p.adjoint() * qh * range_p);
    for (Index i = 0; i < range_p.cols(); ++i) {
      const double c = std::sqrt(std::clamp(h_eig.eigenvalues()(i), 0.0, 1.0));
      const ComplexVec x = range_p * h_eig.eigenvectors().col(i);
      if (c <= tol.cluster_abs) {
        corner2.push_back(x);
      } else if (c >= 1.0 - tol.cluster_abs) {
        corner1.push_back(x);
      } else {
        generic.push_back({c, x});
      }
    }
  }
  std::stable_sort(generic.begin(), generic.end(),
                   [](const Generic& a, const Generic& b) { return a.c > b.c; });

  const Index g = static_cast<Index>(generic.size());
  ComplexMat partners(n, g);
  for (Index j = 0; j < g; ++j) {
    ComplexVec y = kernel_p * (kernel_p.adjoint() * (qh * generic[static_cast<std::size_t>(j)].x));
    const double len = y.norm();
    if (len == 0.0) throw NumericalFailure("canonical_two_projections: degenerate angle");
    partners.col(j) = y / len;
  }

  // Kernel of P minus the generic partners splits into range Q and kernel Q.
  const ComplexMat rest = kernel_p * orthonormal_complement(kernel_p.adjoint() * partners);
  std::vector<ComplexVec> corner3;
  std::vector<ComplexVec> corner4;
  if (rest.cols() > 0) {
    Eigen::SelfAdjointEigenSolver<ComplexMat> r_eig(rest.adjoint() * qh * rest);
    for (Index i = 0; i < rest.cols(); ++i) {
      const ComplexVec z = rest * r_eig.eigenvectors().col(i);
      (r_eig.eigenvalues()(i) > 0.5 ? corner3 : corner4).push_back(z);
    }
  }

  TwoProjectionDecomposition out;
  out.form.d = {static_cast<int>(corner1.size()), static_cast<int>(corner2.size()),
                static_cast<int>(corner3.size()), static_cast<int>(corner4.size())};
  out.unitary.resize(n, n);
  Index col = 0;
  for (const auto* corner : {&corner1, &corner2, &corner3, &corner4}) {
    for (const auto& v : *corner) out.unitary.col(col++) = v;
  }
  for (Index j = 0; j < g; ++j) {
    out.form.angles.push_back(generic[static_cast<std::size_t>(j)].c);
    out.unitary.col(col++) = generic[static_cast<std::size_t>(j)].x;
    out.unitary.col(col++) = partners.col(j);
  }

  const auto [pc, qc] = assemble_two_projections(out.form);
  const ComplexMat& u = out.unitary;
  const double residual = std::max({(u.adjoint() * u - ComplexMat::Identity(n, n)).norm(),
                                    (u * pc * u.adjoint() - p).norm(),
                                    (u * qc * u.adjoint() - q).norm()});
  if (!(residual <= tol.residual_abs)) {
    std::ostringstream msg;
    msg << "canonical_two_projections: reconstruction residual " << residual;
    throw NumericalFailure(msg.str());
  }
  return out;
}

double projection_pair_residual(const ComplexMat& p, const ComplexMat& q) {
  return std::max(projection_residual(p), projection_residual(q));
}

ProjectionCertificate construct_projection_pair(const JordanSpec& spec, const Tolerances& tol) {
  tol.validate();
  Decision decision = decide_projection_product(spec, tol);
  if (!decision.verdict) {
    throw NotAdmissible("Jordan form is not that of a product of two orthogonal projections",
                        std::move(decision));
  }
  const double radius = tol.cluster_abs;
  TwoProjectionForm form;
  int zeros = 0;
  for (const auto& entry : spec.blocks()) {
    const Complex z = entry.eigenvalue;
    const int k = entry.geometric_multiplicity();
    if (std::abs(z) <= radius) {
      zeros = k;
    } else if (std::abs(z - 1.0) <= radius) {
      form.d[0] = k;
    } else {
      form.angles.insert(form.angles.end(), static_cast<std::size_t>(k), std::sqrt(z.real()));
    }
  }
  const int g = static_cast<int>(form.angles.size());
  form.d[3] = zeros - g;
  std::stable_sort(form.angles.begin(), form.angles.end(), std::greater<>());

  ProjectionCertificate cert;
  std::tie(cert.p, cert.q) = assemble_two_projections(form);

  // Columns of S are eigenvectors of PQ laid out like jordan_matrix(spec).
  const Index n = form.dimension();
  const Index pairs_start = form.d[0] + form.d[3];
  ComplexMat s = ComplexMat::Zero(n, n);
  Index col = 0;
  Index next_angle = 0;
  for (const auto& entry : spec.blocks()) {
    const Complex z = entry.eigenvalue;
    const int k = entry.geometric_multiplicity();
    for (int b = 0; b < k; ++b, ++col) {
      if (std::abs(z - 1.0) <= radius) {
        s(b, col) = 1.0;
      } else if (std::abs(z) <= radius) {
        if (b < g) {
          const double c = form.angles[static_cast<std::size_t>(b)];
          s(pairs_start + 2 * b, col) = std::sqrt(1.0 - c * c);
          s(pairs_start + 2 * b + 1, col) = -c;
        } else {
          s(form.d[0] + (b - g), col) = 1.0;
        }
      } else {
        s(pairs_start + 2 * next_angle++, col) = 1.0;
      }
    }
  }

  const ComplexMat j = jordan_matrix(spec);
  const ComplexMat pq = cert.p * cert.q;
  cert.similarity = s;
  cert.cond_S = condition_number(s);
  cert.residual_similarity = (s * j * inverse(s) - pq).norm();
  cert.residual_variety = projection_pair_residual(cert.p, cert.q);
  const double bound = similarity_residual_bound(j, cert.cond_S, tol);
  if (!(cert.residual_similarity <= bound) || !(cert.residual_variety <= tol.residual_abs)) {
    std::ostringstream msg;
    msg << "construct_projection_pair: residuals " << cert.residual_similarity << ", "
        << cert.residual_variety << " exceed their bounds";
    throw NumericalFailure(msg.str());
  }
  return cert;
}

ProjectionCertificate construct_projection_pair(const ComplexMat& a, const Tolerances& tol) {
  const JordanSpec spec = jordan_structure(a, tol);
  ProjectionCertificate cert = construct_projection_pair(spec, tol);
  const JordanTransform pa = jordan_transform(a, spec, tol);
  cert.similarity = cert.similarity * inverse(pa.transform);
  cert.cond_S = condition_number(cert.similarity);
  cert.residual_similarity =
      (cert.similarity * a * inverse(cert.similarity) - cert.p * cert.q).norm();
  const double bound = similarity_residual_bound(a, cert.cond_S, tol);
  if (!(cert.residual_similarity <= bound)) {
    std::ostringstream msg;
    msg << "construct_projection_pair: residual " << cert.residual_similarity
        << " exceeds bound " << bound;
    throw NumericalFailure(msg.str());
  }
  return cert;
}

VerificationReport verify_projection_certificate(const ProjectionCertificate& cert,
                                                 const ComplexMat& original,
                                                 const Tolerances& tol) {
  VerificationReport report;
  const Index n = original.rows();
  auto fits = [n](const ComplexMat& m) {
    return m.rows() == n && m.cols() == n && m.allFinite();
  };
  const bool shapes_ok = original.cols() == n && original.allFinite() && fits(cert.p) &&
                         fits(cert.q) && fits(cert.similarity);
  report.checks.push_back({"shapes", shapes_ok ? 0.0 : 1.0, 0.0, shapes_ok});
  if (!shapes_ok) return report;

  const double rp = projection_residual(cert.p);
  const double rq = projection_residual(cert.q);
  report.checks.push_back({"projection_P", rp, tol.residual_abs, rp <= tol.residual_abs});
  report.checks.push_back({"projection_Q", rq, tol.residual_abs, rq <= tol.residual_abs});

  const double cond = condition_number(cert.similarity);
  double residual = std::numeric_limits<double>::infinity();
  try {
    residual = (cert.similarity * original * inverse(cert.similarity) - cert.p * cert.q).norm();
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

bool in_variety_pi(const ComplexMat& x, const Tolerances& tol) {
  require_finite(x, "in_variety_pi");
  require_square(x, "in_variety_pi");
  const double scale = x.norm();
  return partial_isometry_residual(x) <= tol.residual_abs * (1.0 + scale * scale * scale);
}

bool in_variety_pp(const ComplexMat& x, const Tolerances& tol) {
  require_finite(x, "in_variety_pp");
  require_square(x, "in_variety_pp");
  const double scale = x.norm();
  return (x * x.adjoint() * x - x * x).norm() <= tol.residual_abs * (1.0 + scale * scale * scale);
}

bool in_set_S(const ComplexMat& t, const Tolerances& tol) {
  require_finite(t, "in_set_S");
  require_square(t, "in_set_S");
  const ComplexMat cubed = t * t.adjoint() * t;
  return jordan_structure(cubed, tol).equivalent(jordan_structure(t, tol), tol.cluster_abs);
}

}  // namespace pisim
