#include "qreach/model.hpp"

#include <Eigen/Eigenvalues>

#include "qreach/error.hpp"
#include "qreach/io.hpp"

namespace qreach {
namespace {

constexpr double kDropNorm = 1e-14;

// Re-expresses a channel with at most d^2 Kraus operators via its Choi
// eigendecomposition. Only used once a composition outgrows that bound.
Channel compress(const Channel& ch) {
  const Index d = ch.dim;
  if (static_cast<Index>(ch.ops.size()) <= d * d) return ch;
  CMatrix choi = CMatrix::Zero(d * d, d * d);
  for (const auto& k : ch.ops) {
    const CVector v = vec(k);
    choi.noalias() += v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(choi));
  const double top = es.eigenvalues().maxCoeff();
  Channel out{d, {}};
  for (Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda <= 1e-14 * std::max(1.0, top)) continue;
    out.ops.push_back(std::sqrt(lambda) * unvec(es.eigenvectors().col(i), d));
  }
  if (out.ops.empty()) out.ops.push_back(CMatrix::Zero(d, d));
  return out;
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, path + ": " + what);
}

}  // namespace

std::string format_word(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += w[i];
  }
  return out;
}

// -- Measurement ------------------------------------------------------------------

Index Measurement::dim() const { return operators.empty() ? 0 : operators.begin()->second.rows(); }

bool Measurement::is_projective(const Tolerances& tol) const {
  for (const auto& [a, ma] : operators) {
    for (const auto& [b, mb] : operators) {
      const CMatrix expected = a == b ? ma : CMatrix::Zero(ma.rows(), ma.cols());
      if ((ma * mb - expected).cwiseAbs().maxCoeff() > tol.valid) return false;
    }
  }
  return true;
}

// -- Qmdp -------------------------------------------------------------------------

Qmdp::Qmdp(Index dimension, std::vector<SuperOperator> actions, std::vector<Measurement> measurements,
           std::optional<Availability> availability)
    : dim_(dimension),
      actions_(std::move(actions)),
      measurements_(std::move(measurements)),
      availability_(std::move(availability)) {
  if (dim_ < 1) throw Error(ErrorCode::kInvalidArgument, "model dimension must be at least 1");
  std::set<std::string> seen;
  auto declare = [&](const std::string& name) {
    if (name.empty()) throw Error(ErrorCode::kInvalidArgument, "empty action/measurement name");
    if (!seen.insert(name).second)
      throw Error(ErrorCode::kInvalidArgument, "duplicate name '" + name + "'");
  };
  for (const auto& a : actions_) {
    declare(a.name);
    if (a.channel.dim != dim_ || a.channel.ops.empty())
      throw Error(ErrorCode::kDimensionMismatch, "action '" + a.name + "' has wrong dimension");
    for (const auto& k : a.channel.ops)
      if (k.rows() != dim_ || k.cols() != dim_)
        throw Error(ErrorCode::kDimensionMismatch, "action '" + a.name + "' has a non-square or mis-sized Kraus operator");
  }
  for (const auto& m : measurements_) {
    declare(m.name);
    if (m.operators.empty())
      throw Error(ErrorCode::kInvalidArgument, "measurement '" + m.name + "' has no outcomes");
    for (const auto& [label, op] : m.operators)
      if (op.rows() != dim_ || op.cols() != dim_)
        throw Error(ErrorCode::kDimensionMismatch,
                    "measurement '" + m.name + "' outcome '" + label + "' has wrong dimension");
  }
  if (availability_) {
    for (const auto& [from, next] : *availability_) {
      if (!seen.count(from))
        throw Error(ErrorCode::kUnknownName, "availability refers to undeclared name '" + from + "'");
      for (const auto& n : next)
        if (!seen.count(n))
          throw Error(ErrorCode::kUnknownName, "availability of '" + from + "' refers to undeclared name '" + n + "'");
    }
  }
}

bool Qmdp::is_action(const std::string& name) const {
  for (const auto& a : actions_)
    if (a.name == name) return true;
  return false;
}

bool Qmdp::is_measurement(const std::string& name) const {
  for (const auto& m : measurements_)
    if (m.name == name) return true;
  return false;
}

const SuperOperator& Qmdp::action(const std::string& name) const {
  for (const auto& a : actions_)
    if (a.name == name) return a;
  throw Error(ErrorCode::kUnknownName, "unknown action '" + name + "'");
}

const Measurement& Qmdp::measurement(const std::string& name) const {
  for (const auto& m : measurements_)
    if (m.name == name) return m;
  throw Error(ErrorCode::kUnknownName, "unknown measurement '" + name + "'");
}

std::vector<std::string> Qmdp::names() const {
  std::vector<std::string> out;
  for (const auto& a : actions_) out.push_back(a.name);
  for (const auto& m : measurements_) out.push_back(m.name);
  return out;
}

bool Qmdp::allows(const std::string& previous, const std::string& next) const {
  if (previous.empty() || !availability_) return true;
  auto it = availability_->find(previous);
  if (it == availability_->end()) return true;
  return it->second.count(next) > 0;
}

Qmdp Qmdp::with_actions(const std::vector<std::string>& keep) const {
  std::vector<SuperOperator> acts;
  for (const auto& name : keep) acts.push_back(action(name));
  return Qmdp(dim_, std::move(acts));
}

// -- operations -------------------------------------------------------------------

std::vector<Finding> validate_model(const Qmdp& m, const Tolerances& tol) {
  std::vector<Finding> out;
  const CMatrix id = CMatrix::Identity(m.dim(), m.dim());
  for (const auto& a : m.actions()) {
    const double r = spectral_norm(a.channel.completeness() - id);
    if (r > tol.valid)
      out.push_back({"action " + a.name, "completeness residual " + std::to_string(r) + " on action " + a.name, r});
  }
  for (const auto& meas : m.measurements()) {
    const double r = spectral_norm(measurement_to_superop(meas).completeness() - id);
    if (r > tol.valid)
      out.push_back({"measurement " + meas.name,
                     "completeness residual " + std::to_string(r) + " on measurement " + meas.name, r});
  }
  return out;
}

Channel measurement_to_superop(const Measurement& meas) {
  Channel ch{meas.dim(), {}};
  for (const auto& [label, op] : meas.operators) ch.ops.push_back(op);
  return ch;
}

Channel letter_channel(const Qmdp& m, const std::string& name) {
  if (m.is_action(name)) return m.action(name).channel;
  if (m.is_measurement(name)) return measurement_to_superop(m.measurement(name));
  throw Error(ErrorCode::kUnknownName, "unknown name '" + name + "'");
}

Channel compose_word(const Qmdp& m, const Word& s) {
  Channel acc = Channel::identity(m.dim());
  for (const auto& name : s) acc = compress(acc.then(letter_channel(m, name), kDropNorm));
  if (acc.ops.empty()) acc.ops.push_back(CMatrix::Zero(m.dim(), m.dim()));
  return acc;
}

Channel restrict_superop(const Channel& e, const Subspace& t, const Tolerances& tol) {
  if (t.ambient_dim() != e.dim)
    throw Error(ErrorCode::kDimensionMismatch, "restriction subspace has wrong ambient dimension");
  const CMatrix& p = t.projector();
  Channel out{e.dim, {}};
  for (const auto& k : e.ops) {
    CMatrix r = p * k * p;
    if (r.norm() > tol.prune) out.ops.push_back(std::move(r));
  }
  return out;
}

// -- serialization ----------------------------------------------------------------

Qmdp load_model(const std::string& text) {
  const io::Json j = io::parse(text, "model");
  if (!j.is_object()) schema_error("model", "expected a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "dimension" && key != "actions" && key != "measurements" && key != "availability" &&
        key != "metadata")
      schema_error(key, "unknown field");
  if (!j.contains("dimension") || !j["dimension"].is_number_integer() || j["dimension"].get<long long>() < 1)
    schema_error("dimension", "expected a positive integer");
  const Index d = j["dimension"].get<Index>();

  std::vector<SuperOperator> actions;
  if (!j.contains("actions") || !j["actions"].is_array()) schema_error("actions", "expected a list");
  for (std::size_t i = 0; i < j["actions"].size(); ++i) {
    const std::string path = "actions[" + std::to_string(i) + "]";
    const io::Json& a = j["actions"][i];
    if (!a.is_object() || !a.contains("name") || !a["name"].is_string())
      schema_error(path + ".name", "expected a string");
    const std::string name = a["name"].get<std::string>();
    if (!a.contains("kraus") || !a["kraus"].is_array() || a["kraus"].empty())
      schema_error(path + ".kraus", "action '" + name + "' needs a non-empty Kraus list");
    std::vector<CMatrix> ops;
    for (std::size_t k = 0; k < a["kraus"].size(); ++k) {
      const std::string kp = path + ".kraus[" + std::to_string(k) + "]";
      CMatrix op = io::matrix_from_json(a["kraus"][k], kp);
      if (op.rows() != op.cols()) schema_error(kp, "Kraus matrix of action '" + name + "' is not square");
      if (op.rows() != d)
        schema_error(kp, "Kraus matrix of action '" + name + "' does not match dimension " + std::to_string(d));
      ops.push_back(std::move(op));
    }
    actions.push_back({name, Channel{d, std::move(ops)}});
  }

  std::vector<Measurement> measurements;
  if (j.contains("measurements")) {
    if (!j["measurements"].is_array()) schema_error("measurements", "expected a list");
    for (std::size_t i = 0; i < j["measurements"].size(); ++i) {
      const std::string path = "measurements[" + std::to_string(i) + "]";
      const io::Json& m = j["measurements"][i];
      if (!m.is_object() || !m.contains("name") || !m["name"].is_string())
        schema_error(path + ".name", "expected a string");
      const std::string name = m["name"].get<std::string>();
      if (!m.contains("operators") || !m["operators"].is_object() || m["operators"].empty())
        schema_error(path + ".operators", "measurement '" + name + "' needs an outcome map");
      Measurement meas{name, {}};
      for (const auto& [label, mat] : m["operators"].items()) {
        const std::string op_path = path + ".operators." + label;
        CMatrix op = io::matrix_from_json(mat, op_path);
        if (op.rows() != d || op.cols() != d)
          schema_error(op_path, "operator of measurement '" + name + "' must be " + std::to_string(d) + "x" +
                                    std::to_string(d));
        meas.operators.emplace(label, std::move(op));
      }
      measurements.push_back(std::move(meas));
    }
  }

  std::optional<Availability> availability;
  if (j.contains("availability") && !j["availability"].is_null()) {
    if (!j["availability"].is_object()) schema_error("availability", "expected an object");
    Availability av;
    for (const auto& [from, next] : j["availability"].items()) {
      if (!next.is_array()) schema_error("availability." + from, "expected a list of names");
      for (const auto& n : next) {
        if (!n.is_string()) schema_error("availability." + from, "expected a list of names");
        av[from].insert(n.get<std::string>());
      }
    }
    availability = std::move(av);
  }

  try {
    return Qmdp(d, std::move(actions), std::move(measurements), std::move(availability));
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("model: ") + e.what());
  }
}

std::string save_model(const Qmdp& m) {
  io::Json j;
  j["dimension"] = m.dim();
  io::Json actions = io::Json::array();
  for (const auto& a : m.actions()) {
    io::Json kraus = io::Json::array();
    for (const auto& k : a.channel.ops) kraus.push_back(io::matrix_to_json(k));
    actions.push_back({{"name", a.name}, {"kraus", kraus}});
  }
  j["actions"] = actions;
  io::Json meas = io::Json::array();
  for (const auto& mm : m.measurements()) {
    io::Json ops = io::Json::object();
    for (const auto& [label, op] : mm.operators) ops[label] = io::matrix_to_json(op);
    meas.push_back({{"name", mm.name}, {"operators", ops}});
  }
  j["measurements"] = meas;
  if (m.availability()) {
    io::Json av = io::Json::object();
    for (const auto& [from, next] : *m.availability()) av[from] = std::vector<std::string>(next.begin(), next.end());
    j["availability"] = av;
  }
  return j.dump(2) + "\n";
}

}  // namespace qreach
