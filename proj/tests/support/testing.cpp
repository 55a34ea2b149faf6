#include "testing.hpp"

#include <algorithm>
#include <cmath>

#include "qreach/model.hpp"

namespace qreach::testing {

CMatrix ket_bra(Index d, Index i, Index j) {
  CMatrix m = CMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

CMatrix pure(Index d, Index i) { return ket_bra(d, i, i); }

CVector ket(Index d, Index i) {
  CVector v = CVector::Zero(d);
  v(i) = 1.0;
  return v;
}

CMatrix random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = Complex(n(rng), n(rng));
  return g;
}

CMatrix random_isometry(Index rows, Index cols, Rng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_gaussian(rows, cols, rng));
  return qr.householderQ() * CMatrix::Identity(rows, cols);
}

CMatrix random_unitary(Index d, Rng& rng) { return random_isometry(d, d, rng); }

CMatrix random_hermitian(Index d, Rng& rng) {
  const CMatrix g = random_gaussian(d, d, rng);
  return (g + g.adjoint()) / 2.0;
}

CMatrix random_density(Index d, Rng& rng, Index rank) {
  const CMatrix g = random_gaussian(d, rank == 0 ? d : rank, rng);
  const CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

CMatrix random_density_in(const Subspace& s, Rng& rng) {
  const CMatrix inner = random_density(s.dim(), rng);
  return s.basis() * inner * s.basis().adjoint();
}

Channel random_channel(Index d, int n, Rng& rng) {
  const CMatrix v = random_isometry(n * d, d, rng);
  Channel e{d, {}};
  for (int i = 0; i < n; ++i) e.ops.push_back(v.middleRows(i * d, d));
  return e;
}

InvariantModel random_invariant_model(Index d, Index b_dim, int actions, Rng& rng, double leak) {
  const Index t = d - b_dim;
  const CMatrix w = random_unitary(d, rng);
  std::bernoulli_distribution leaks(leak);
  std::uniform_int_distribution<int> count(1, 2);
  std::vector<SuperOperator> acts;
  for (int a = 0; a < actions; ++a) {
    Channel e{d, {}};
    // T block: columns 0..t-1, rows anywhere when leaking, else rows in T.
    const int n1 = count(rng);
    const bool leaky = leaks(rng);
    const Index out_rows = leaky ? d : t;
    const CMatrix v = random_isometry(n1 * out_rows, t, rng);
    for (int i = 0; i < n1; ++i) {
      CMatrix k = CMatrix::Zero(d, d);
      k.block(0, 0, out_rows, t) = v.middleRows(i * out_rows, out_rows);
      e.ops.push_back(k);
    }
    const int n2 = count(rng);
    const CMatrix u = random_isometry(n2 * b_dim, b_dim, rng);
    for (int i = 0; i < n2; ++i) {
      CMatrix k = CMatrix::Zero(d, d);
      k.block(t, t, b_dim, b_dim) = u.middleRows(i * b_dim, b_dim);
      e.ops.push_back(k);
    }
    for (auto& k : e.ops) k = w * k * w.adjoint();
    acts.push_back({"a" + std::to_string(a), e});
  }
  return {Qmdp(d, std::move(acts)), Subspace::span(w.rightCols(b_dim))};
}

Qmdp forward_chain() {
  const Index d = 4;
  Channel a{d, {ket_bra(d, 1, 0), ket_bra(d, 2, 1), ket_bra(d, 3, 2), ket_bra(d, 3, 3)}};
  Channel b{d, {ket_bra(d, 2, 0), ket_bra(d, 2, 1), ket_bra(d, 3, 2), ket_bra(d, 3, 3)}};
  return Qmdp(d, {{"a", a}, {"b", b}});
}

Word random_word(const Qmdp& m, int length, Rng& rng) {
  const auto names = m.names();
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  Word w;
  for (int i = 0; i < length; ++i) w.push_back(names[pick(rng)]);
  return w;
}

CMatrix oracle_apply(const Channel& e, const CMatrix& rho) {
  const Index d = rho.rows();
  CMatrix out = CMatrix::Zero(d, d);
  for (const auto& k : e.ops)
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        Complex s = 0.0;
        for (Index p = 0; p < d; ++p)
          for (Index q = 0; q < d; ++q) s += k(i, p) * rho(p, q) * std::conj(k(j, q));
        out(i, j) += s;
      }
  return out;
}

CMatrix oracle_representation(const Channel& e) {
  const Index d = e.dim;
  CMatrix m(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      const CMatrix img = oracle_apply(e, ket_bra(d, i, j));
      for (Index r = 0; r < d; ++r)
        for (Index c = 0; c < d; ++c) m(r * d + c, i * d + j) = img(r, c);
    }
  return m;
}

CMatrix oracle_periodic_state(const Qmdp& m, const Word& w, const CMatrix& rho0, int n) {
  CMatrix rho = rho0;
  for (int step = 0; step < n; ++step) {
    const std::string& name = w[step % w.size()];
    Channel e{m.dim(), {}};
    if (m.is_action(name)) {
      e = m.action(name).channel;
    } else {
      for (const auto& [label, op] : m.measurement(name).operators) e.ops.push_back(op);
    }
    rho = oracle_apply(e, rho);
  }
  return rho;
}

ClassicalMdp random_mdp(int states, int actions, Rng& rng) {
  ClassicalMdp c;
  c.initial = 0;
  for (int a = 0; a < actions; ++a) c.actions.push_back("a" + std::to_string(a));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> succ(0, states - 1);
  std::uniform_int_distribution<int> fan(1, 3);
  c.transitions.assign(states, std::vector<std::vector<std::pair<double, int>>>(actions));
  c.target.assign(states, false);
  for (int s = 0; s < states; ++s) {
    c.target[s] = u(rng) < 0.15;
    for (int a = 0; a < actions; ++a) {
      if (u(rng) < 0.2) continue;  // disabled
      const int k = fan(rng);
      std::vector<double> w(k);
      double total = 0.0;
      for (auto& x : w) total += (x = 0.1 + u(rng));
      for (int i = 0; i < k; ++i) c.transitions[s][a].push_back({w[i] / total, succ(rng)});
    }
  }
  return c;
}

std::string example_text(const std::string& name) { return example_to_json(generate_example(name)); }

}  // namespace qreach::testing
