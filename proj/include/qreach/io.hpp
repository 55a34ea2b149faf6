#pragma once

#include <string>

#include <json.hpp>

#include "qreach/linalg.hpp"

namespace qreach::io {

using Json = nlohmann::json;

/// Parses text as JSON, reporting syntax errors as kSchemaViolation.
Json parse(const std::string& text, const std::string& what);

/// Complex scalars are [re, im]; a bare number is read as a real scalar.
Json scalar_to_json(Complex z);
Complex scalar_from_json(const Json& j, const std::string& path);

/// Matrices are row-major lists of rows.
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, const std::string& path);

Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j, const std::string& path);

/// Subspace file: {"basis": [vector...]} or {"projector": matrix}.
Subspace subspace_from_json(const Json& j, Index ambient, const std::string& path,
                            const Tolerances& tol = {});
Json subspace_to_json(const Subspace& s);

/// State file: {"matrix": density} or {"vector": amplitudes} (normalised).
CMatrix state_from_json(const Json& j, Index d, const std::string& path,
                        const Tolerances& tol = {});
Json state_to_json(const CMatrix& rho);

}  // namespace qreach::io
