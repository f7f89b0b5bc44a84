#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "pisim/construct.hpp"
#include "pisim/decide.hpp"
#include "pisim/jordan.hpp"
#include "pisim/projections.hpp"

// JSON encodings shared by the library and the command-line tool.
//
//   ComplexMat         {"rows": n, "cols": m, "data": [[re, im], ...]}   (row-major)
//   JordanSpec         {"n": n, "blocks": [{"eig": [re, im], "sizes": [k1, ...]}, ...]}
//   Decision           {"verdict": b, "conditions": [{"id", "passed", "detail", "eigenvalues"}]}
//   Certificate        {"V", "S", "residual_similarity", "residual_variety", "cond_S"}
//   ProjectionCert.    {"P", "Q", "S", "residual_similarity", "residual_variety", "cond_S"}
//   TwoProjectionForm  {"d": [d1, d2, d3, d4], "angles": [c1, ...]}
//
// Parsers throw InvalidInput on malformed documents.

namespace pisim {

using Json = nlohmann::json;

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

Json matrix_to_json(const ComplexMat& m);
ComplexMat matrix_from_json(const Json& j);

Json spec_to_json(const JordanSpec& spec);
JordanSpec spec_from_json(const Json& j, const Tolerances& tol = {});

Json decision_to_json(const Decision& d);
Decision decision_from_json(const Json& j);

Json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

Json projection_certificate_to_json(const ProjectionCertificate& c);
ProjectionCertificate projection_certificate_from_json(const Json& j);

Json two_projection_form_to_json(const TwoProjectionForm& f);
TwoProjectionForm two_projection_form_from_json(const Json& j);

Json verification_to_json(const VerificationReport& r);

/// Parses text, converting parse errors into InvalidInput.
Json parse_json(const std::string& text);

/// Compact serialization terminated by a newline; doubles round-trip exactly.
std::string dump_json(const Json& j);

}  // namespace pisim
