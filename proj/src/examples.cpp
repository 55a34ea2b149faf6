#include "qreach/examples.hpp"

#include <cmath>

#include "qreach/error.hpp"
#include "qreach/termination.hpp"

namespace qreach {
namespace {

// |i><j| with the paper's 1-based labels.
CMatrix ket_bra(Index d, Index i, Index j) {
  CMatrix m = CMatrix::Zero(d, d);
  m(i - 1, j - 1) = 1.0;
  return m;
}

CMatrix pure(Index d, Index i) { return ket_bra(d, i, i); }

io::Json periodic(const Word& w) { return io::Json{{"type", "periodic"}, {"word", w}}; }

io::Json lasso(const Word& prefix, const Word& cycle) {
  return io::Json{{"type", "lasso"}, {"prefix", prefix}, {"cycle", cycle}};
}

Example nondeterministic() {
  const Index d = 4;
  const double h = 1.0 / std::sqrt(2.0);
  Channel alpha{d, {h * ket_bra(d, 2, 1), h * ket_bra(d, 1, 1), ket_bra(d, 2, 2), ket_bra(d, 3, 3), ket_bra(d, 4, 4)}};
  Channel beta{d, {ket_bra(d, 4, 1), ket_bra(d, 3, 2), ket_bra(d, 3, 3), ket_bra(d, 4, 4)}};
  Example ex{"example-nondeterministic", Qmdp(d, {{"alpha", alpha}, {"beta", beta}}),
             Subspace::span_of_basis(d, {2}), pure(d, 1), {}, std::nullopt};
  ex.schedulers = {lasso({"alpha"}, {"beta"}), periodic({"alpha"})};
  return ex;
}

Example rotation() {
  const Index d = 4;
  const double theta = 0.6;
  CMatrix a1 = CMatrix::Zero(d, d);
  a1(0, 0) = std::cos(theta);
  a1(0, 1) = std::sin(theta);
  a1(1, 0) = -std::sin(theta);
  a1(1, 1) = std::cos(theta);
  Channel a{d, {a1, ket_bra(d, 3, 3), ket_bra(d, 4, 4)}};
  Channel b{d, {ket_bra(d, 3, 1), ket_bra(d, 4, 2), ket_bra(d, 3, 3), ket_bra(d, 4, 4)}};
  Example ex{"example-rotation", Qmdp(d, {{"a", a}, {"b", b}}), Subspace::span_of_basis(d, {3}), pure(d, 1), {},
             std::nullopt};
  ex.schedulers = {periodic({"a", "a", "a", "a", "a", "a", "a", "a", "b"})};
  return ex;
}

Example cycle() {
  const Index d = 3;
  Channel a{d, {ket_bra(d, 3, 1), ket_bra(d, 1, 2), ket_bra(d, 3, 3)}};
  Channel b{d, {ket_bra(d, 2, 1), ket_bra(d, 3, 2), ket_bra(d, 3, 3)}};
  Example ex{"example-cycle", Qmdp(d, {{"a", a}, {"b", b}}), Subspace::span_of_basis(d, {2}),
             (pure(d, 1) + pure(d, 2)) / 2.0, {}, std::nullopt};
  ex.schedulers = {periodic({"a", "b"}), lasso({"a", "b", "a", "b", "a", "a"}, {"a", "b"})};
  return ex;
}

Example loop(const std::string& name, const std::vector<CMatrix>& unitaries) {
  CMatrix p1 = CMatrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  const LoopProgram lp = build_loop_model(p1, unitaries);
  CMatrix rho0 = CMatrix::Zero(2, 2);
  rho0(0, 0) = 1.0;
  Example ex{name, lp.model, lp.exit, rho0, {}, LoopSpec{p1, unitaries}};
  for (const auto& a : lp.model.actions()) ex.schedulers.push_back(periodic({a.name}));
  return ex;
}

CMatrix pauli_x() {
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

}  // namespace

std::vector<std::string> example_names() {
  return {"example-nondeterministic", "example-rotation", "example-cycle", "loop-not", "loop-id", "loop-two-process"};
}

Example generate_example(const std::string& name) {
  if (name == "example-nondeterministic") return nondeterministic();
  if (name == "example-rotation") return rotation();
  if (name == "example-cycle") return cycle();
  const CMatrix id = CMatrix::Identity(2, 2);
  if (name == "loop-not") return loop(name, {pauli_x()});
  if (name == "loop-id") return loop(name, {id});
  if (name == "loop-two-process") return loop(name, {id, pauli_x()});
  std::string known;
  for (const auto& n : example_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error(ErrorCode::kUnknownName, "unknown example '" + name + "'; available: " + known);
}

std::string example_to_json(const Example& ex) {
  io::Json j = io::parse(save_model(ex.model), "model");
  io::Json meta{{"name", ex.name},
                {"target", io::subspace_to_json(ex.target)},
                {"initial", io::state_to_json(ex.initial)},
                {"schedulers", ex.schedulers}};
  if (ex.loop) {
    io::Json us = io::Json::array();
    for (const auto& u : ex.loop->unitaries) us.push_back(io::matrix_to_json(u));
    meta["loop"] = {{"guard", io::matrix_to_json(ex.loop->guard)}, {"unitaries", us}};
  }
  j["metadata"] = meta;
  return j.dump(2) + "\n";
}

}  // namespace qreach
