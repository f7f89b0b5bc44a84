#include "pisim/io.hpp"

#include <cmath>

namespace pisim {
namespace {

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string(what) + ": " + e.what());
  }
}

double finite_number(const Json& j, const char* what) {
  if (!j.is_number()) throw InvalidInput(std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InvalidInput(std::string(what) + ": non-finite number");
  return v;
}

int positive_int(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw InvalidInput(std::string(what) + ": expected a positive integer");
  }
  return j.get<int>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidInput(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput("complex scalar must be [re, im]");
  return {finite_number(j[0], "real part"), finite_number(j[1], "imaginary part")};
}

Json matrix_to_json(const ComplexMat& m) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) data.push_back(complex_to_json(m(r, c)));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMat matrix_from_json(const Json& j) {
  const int rows = positive_int(field(j, "rows"), "rows");
  const int cols = positive_int(field(j, "cols"), "cols");
  const Json& data = field(j, "data");
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows) * cols) {
    throw InvalidInput("matrix data must hold rows * cols entries");
  }
  ComplexMat m(rows, cols);
  std::size_t k = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(data[k++]);
  }
  return m;
}

Json spec_to_json(const JordanSpec& spec) {
  Json blocks = Json::array();
  for (const auto& entry : spec.blocks()) {
    blocks.push_back(Json{{"eig", complex_to_json(entry.eigenvalue)}, {"sizes", entry.sizes}});
  }
  return Json{{"n", spec.dimension()}, {"blocks", std::move(blocks)}};
}

JordanSpec spec_from_json(const Json& j, const Tolerances& tol) {
  const Json& blocks = field(j, "blocks");
  if (!blocks.is_array()) throw InvalidInput("\"blocks\" must be an array");
  std::vector<JordanEigenBlocks> entries;
  for (const Json& b : blocks) {
    JordanEigenBlocks entry;
    entry.eigenvalue = complex_from_json(field(b, "eig"));
    const Json& sizes = field(b, "sizes");
    if (!sizes.is_array()) throw InvalidInput("\"sizes\" must be an array");
    for (const Json& s : sizes) entry.sizes.push_back(positive_int(s, "block size"));
    entries.push_back(std::move(entry));
  }
  JordanSpec spec = JordanSpec::canonical(std::move(entries), tol);
  if (j.contains("n") && positive_int(j.at("n"), "n") != spec.dimension()) {
    throw InvalidInput("\"n\" does not match the total block size");
  }
  if (spec.dimension() == 0) throw InvalidInput("Jordan spec must have at least one block");
  return spec;
}

Json decision_to_json(const Decision& d) {
  Json conditions = Json::array();
  for (const auto& c : d.conditions) {
    Json eigs = Json::array();
    for (Complex z : c.eigenvalues) eigs.push_back(complex_to_json(z));
    conditions.push_back(Json{{"id", std::string(to_string(c.id))},
                              {"passed", c.passed},
                              {"detail", c.detail},
                              {"eigenvalues", std::move(eigs)}});
  }
  return Json{{"verdict", d.verdict}, {"conditions", std::move(conditions)}};
}

Decision decision_from_json(const Json& j) {
  return guarded("decision", [&] {
    Decision d;
    d.verdict = field(j, "verdict").get<bool>();
    for (const Json& c : field(j, "conditions")) {
      ConditionReport r{condition_id_from_string(field(c, "id").get<std::string>()),
                        field(c, "passed").get<bool>(), field(c, "detail").get<std::string>(),
                        {}};
      for (const Json& z : field(c, "eigenvalues")) r.eigenvalues.push_back(complex_from_json(z));
      d.conditions.push_back(std::move(r));
    }
    return d;
  });
}

Json certificate_to_json(const Certificate& c) {
  return Json{{"V", matrix_to_json(c.target)},
              {"S", matrix_to_json(c.similarity)},
              {"residual_similarity", c.residual_similarity},
              {"residual_variety", c.residual_variety},
              {"cond_S", c.cond_S}};
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.target = matrix_from_json(field(j, "V"));
  c.similarity = matrix_from_json(field(j, "S"));
  c.residual_similarity = finite_number(field(j, "residual_similarity"), "residual_similarity");
  c.residual_variety = finite_number(field(j, "residual_variety"), "residual_variety");
  c.cond_S = finite_number(field(j, "cond_S"), "cond_S");
  return c;
}

Json projection_certificate_to_json(const ProjectionCertificate& c) {
  return Json{{"P", matrix_to_json(c.p)},
              {"Q", matrix_to_json(c.q)},
              {"S", matrix_to_json(c.similarity)},
              {"residual_similarity", c.residual_similarity},
              {"residual_variety", c.residual_variety},
              {"cond_S", c.cond_S}};
}

ProjectionCertificate projection_certificate_from_json(const Json& j) {
  ProjectionCertificate c;
  c.p = matrix_from_json(field(j, "P"));
  c.q = matrix_from_json(field(j, "Q"));
  c.similarity = matrix_from_json(field(j, "S"));
  c.residual_similarity = finite_number(field(j, "residual_similarity"), "residual_similarity");
  c.residual_variety = finite_number(field(j, "residual_variety"), "residual_variety");
  c.cond_S = finite_number(field(j, "cond_S"), "cond_S");
  return c;
}

Json two_projection_form_to_json(const TwoProjectionForm& f) {
  return Json{{"d", f.d}, {"angles", f.angles}};
}

TwoProjectionForm two_projection_form_from_json(const Json& j) {
  return guarded("two projection form", [&] {
    TwoProjectionForm f;
    f.d = field(j, "d").get<std::array<int, 4>>();
    f.angles = field(j, "angles").get<std::vector<double>>();
    return f;
  });
}

Json verification_to_json(const VerificationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(
        Json{{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"passed", c.passed}});
  }
  return Json{{"passed", r.passed}, {"checks", std::move(checks)}};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("JSON parse error: ") + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace pisim
