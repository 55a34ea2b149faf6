#include "qreach/io.hpp"

#include <cmath>

#include "qreach/error.hpp"

namespace qreach::io {
namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, path + ": " + what);
}

}  // namespace

Json parse(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSchemaViolation, what + ": invalid JSON (" + e.what() + ")");
  }
}

// Adding 0.0 turns -0.0 into 0.0.
Json scalar_to_json(Complex z) { return Json::array({z.real() + 0.0, z.imag() + 0.0}); }

Complex scalar_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    schema_error(path, "expected a complex scalar [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty list of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) schema_error(path, "expected a non-empty list of rows");
  CMatrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) schema_error(rp, "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          scalar_from_json(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v(i)));
  return out;
}

CVector vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty vector");
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = scalar_from_json(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Subspace subspace_from_json(const Json& j, Index ambient, const std::string& path,
                            const Tolerances& tol) {
  if (!j.is_object()) schema_error(path, "expected an object with \"basis\" or \"projector\"");
  if (j.contains("basis")) {
    const Json& b = j.at("basis");
    if (!b.is_array()) schema_error(path + ".basis", "expected a list of vectors");
    CMatrix vecs(ambient, static_cast<Index>(b.size()));
    for (std::size_t k = 0; k < b.size(); ++k) {
      const std::string vp = path + ".basis[" + std::to_string(k) + "]";
      CVector v = vector_from_json(b[k], vp);
      if (v.size() != ambient) schema_error(vp, "vector length does not match dimension");
      vecs.col(static_cast<Index>(k)) = v;
    }
    return Subspace::span(vecs, tol);
  }
  if (j.contains("projector")) {
    CMatrix p = matrix_from_json(j.at("projector"), path + ".projector");
    if (p.rows() != ambient || p.cols() != ambient)
      schema_error(path + ".projector", "projector dimension does not match model");
    if ((p * p - p).cwiseAbs().maxCoeff() > tol.valid || (p - p.adjoint()).cwiseAbs().maxCoeff() > tol.valid)
      schema_error(path + ".projector", "matrix is not an orthogonal projector");
    return Subspace::from_projector(p, tol);
  }
  schema_error(path, "expected \"basis\" or \"projector\"");
}

Json subspace_to_json(const Subspace& s) {
  Json basis = Json::array();
  for (Index k = 0; k < s.dim(); ++k) basis.push_back(vector_to_json(s.basis().col(k)));
  return Json{{"basis", basis}};
}

CMatrix state_from_json(const Json& j, Index d, const std::string& path, const Tolerances& tol) {
  if (!j.is_object()) schema_error(path, "expected an object with \"matrix\" or \"vector\"");
  if (j.contains("vector")) {
    CVector v = vector_from_json(j.at("vector"), path + ".vector");
    if (v.size() != d) schema_error(path + ".vector", "length does not match dimension");
    if (v.norm() == 0.0) schema_error(path + ".vector", "zero vector");
    v.normalize();
    return v * v.adjoint();
  }
  if (j.contains("matrix")) {
    CMatrix rho = matrix_from_json(j.at("matrix"), path + ".matrix");
    if (rho.rows() != d || rho.cols() != d)
      schema_error(path + ".matrix", "dimension does not match model");
    if (std::abs(rho.trace() - Complex(1.0)) > tol.valid)
      schema_error(path + ".matrix", "density matrix must have unit trace");
    try {
      support(rho, tol);
    } catch (const Error& e) {
      schema_error(path + ".matrix", e.what());
    }
    return rho;
  }
  schema_error(path, "expected \"matrix\" or \"vector\"");
}

Json state_to_json(const CMatrix& rho) { return Json{{"matrix", matrix_to_json(rho)}}; }

}  // namespace qreach::io
