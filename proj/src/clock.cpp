#include "stoqkit/clock.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "stoqkit/errors.hpp"

namespace stoqkit {

namespace {

void check_s(double s, const char* op) {
  if (!(s >= 0.0 && s <= 0.5)) {
    throw ContractError(std::string(op) + ": s must lie in [0, 1/2]");
  }
}

// |bits><bits| on k qubits; bits is a string of '0'/'1'.
DenseMatrix pattern(const std::string& bits) {
  const int k = static_cast<int>(bits.size());
  DenseMatrix m = DenseMatrix::Zero(Eigen::Index(1) << k, Eigen::Index(1) << k);
  const auto idx = static_cast<Eigen::Index>(std::stoul(bits, nullptr, 2));
  m(idx, idx) = 1.0;
  return m;
}

// |to><from| on k qubits.
DenseMatrix transition(const std::string& to, const std::string& from) {
  const int k = static_cast<int>(to.size());
  DenseMatrix m = DenseMatrix::Zero(Eigen::Index(1) << k, Eigen::Index(1) << k);
  m(static_cast<Eigen::Index>(std::stoul(to, nullptr, 2)),
    static_cast<Eigen::Index>(std::stoul(from, nullptr, 2))) = 1.0;
  return m;
}

DenseMatrix kron_dense(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Gates

Gate Gate::cnot(int control, int target) {
  Gate g;
  g.kind = GateKind::CNOT;
  g.qubits = {control, target};
  return g;
}

Gate Gate::rot(int qubit, double angle) {
  Gate g;
  g.kind = GateKind::ROT;
  g.qubits = {qubit};
  g.angle = angle;
  return g;
}

Gate Gate::identity() { return Gate{}; }

Gate Gate::custom(std::vector<int> qubits, DenseMatrix unitary) {
  Gate g;
  g.kind = GateKind::Custom;
  g.qubits = std::move(qubits);
  g.unitary = std::move(unitary);
  return g;
}

DenseMatrix Gate::matrix() const {
  switch (kind) {
    case GateKind::CNOT: {
      DenseMatrix m = DenseMatrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return m;
    }
    case GateKind::ROT: {
      DenseMatrix m(2, 2);
      m << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
      return m;
    }
    case GateKind::Identity:
      return DenseMatrix::Identity(1, 1);
    case GateKind::Custom:
      return unitary;
  }
  return {};
}

bool Gate::is_real() const {
  if (kind != GateKind::Custom) return true;
  return unitary.imag().cwiseAbs().maxCoeff() <= kCoefficientCutoff;
}

std::string Gate::describe() const {
  std::ostringstream out;
  switch (kind) {
    case GateKind::CNOT: out << "CNOT(" << qubits[0] << ", " << qubits[1] << ")"; break;
    case GateKind::ROT: out << "ROT(" << qubits[0] << ", " << angle << ")"; break;
    case GateKind::Identity: out << "IDENTITY"; break;
    case GateKind::Custom: {
      out << "CUSTOM(";
      for (std::size_t i = 0; i < qubits.size(); ++i) out << (i ? ", " : "") << qubits[i];
      out << ")";
      break;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Circuits

QuantumCircuit::QuantumCircuit(int num_qubits, std::vector<Gate> gates)
    : num_qubits_(num_qubits), gates_(std::move(gates)) {
  if (num_qubits < 1) throw ContractError("circuit needs at least one qubit");
  for (std::size_t j = 0; j < gates_.size(); ++j) {
    const Gate& g = gates_[j];
    const std::string where = "gate " + std::to_string(j + 1) + " " + g.describe();
    const std::size_t expected = g.kind == GateKind::CNOT ? 2 : g.kind == GateKind::ROT ? 1 : 0;
    if (g.kind != GateKind::Custom && g.qubits.size() != expected) {
      throw ContractError(where + ": wrong number of qubits");
    }
    if (g.qubits.size() > 2) throw ContractError(where + ": arity exceeds 2");
    std::set<int> seen;
    for (int q : g.qubits) {
      if (q < 0 || q >= num_qubits) throw ContractError(where + ": qubit index out of range");
      if (!seen.insert(q).second) throw ContractError(where + ": repeated qubit");
    }
    if (g.kind == GateKind::Custom) {
      const auto d = Eigen::Index(1) << g.qubits.size();
      if (g.unitary.rows() != d || g.unitary.cols() != d) {
        throw ContractError(where + ": matrix size does not match arity");
      }
      const double err = (g.unitary.adjoint() * g.unitary - DenseMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
      if (err > 1e-12) throw ContractError(where + ": matrix is not unitary");
    }
  }
}

StateVector QuantumCircuit::state_after(int j, const StateVector& initial) const {
  if (j < 0 || j > size()) throw ContractError("circuit step out of range");
  if (initial.size() != (Eigen::Index(1) << num_qubits_)) {
    throw ContractError("initial state has wrong dimension");
  }
  StateVector psi = initial;
  for (int k = 0; k < j; ++k) {
    const Gate& g = gates_[k];
    if (g.kind == GateKind::Identity) continue;
    psi = LocalOperator{g.qubits, g.matrix(), g.describe()}.embed(num_qubits_).apply(psi);
  }
  return psi;
}

StateVector QuantumCircuit::state_after(int j) const {
  return state_after(j, basis_state(num_qubits_, 0));
}

QuantumCircuit QuantumCircuit::padded(int count) const {
  if (count < 0) throw ContractError("padding count must be nonnegative");
  std::vector<Gate> gates = gates_;
  gates.insert(gates.end(), count, Gate::identity());
  return QuantumCircuit(num_qubits_, std::move(gates));
}

// ---------------------------------------------------------------------------
// Clock construction

OperatorMatrix FFHamiltonian::realize() const {
  OperatorMatrix sum(total_qubits());
  for (const auto& t : terms) sum = sum + t.embed(total_qubits());
  return sum;
}

std::vector<LocalHamiltonian> FFHamiltonian::term_hamiltonians() const {
  std::vector<LocalHamiltonian> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.to_hamiltonian(total_qubits()));
  return out;
}

FFHamiltonian build_ff(const QuantumCircuit& circuit, double s) {
  check_s(s, "build_ff");
  const int L = circuit.size();
  if (L < 1) throw ContractError("build_ff: circuit must contain at least one gate");
  FFHamiltonian h;
  h.s = s;
  h.n = circuit.num_qubits();
  h.L = L;
  h.b = std::sqrt(s * (1.0 - s));
  h.r = std::sqrt(s / (1.0 - s));
  auto c = [&](int k) { return h.clock_qubit(k); };

  h.terms.push_back({{c(1)}, pattern("0"), "pin"});
  for (int j = 1; j <= L; ++j) {
    h.terms.push_back({{c(j), c(j + 1)}, pattern("01"), "clock_" + std::to_string(j)});
  }
  for (int j = 1; j <= h.n; ++j) {
    h.terms.push_back({{j - 1, c(1), c(2)}, kron_dense(pattern("1"), pattern("10")),
                       "init_" + std::to_string(j)});
  }
  for (int j = 1; j <= L; ++j) {
    const Gate& g = circuit.gates()[j - 1];
    const DenseMatrix u = g.matrix();
    const DenseMatrix one = DenseMatrix::Identity(u.rows(), u.cols());
    const bool last = j == L;
    const std::string from = last ? "10" : "100";
    const std::string to = last ? "11" : "110";
    const DenseMatrix hop = kron_dense(u, transition(to, from));
    DenseMatrix m = s * kron_dense(one, pattern(from)) + (1.0 - s) * kron_dense(one, pattern(to)) -
                    h.b * (hop + hop.adjoint());
    std::vector<int> qubits = g.qubits;
    qubits.push_back(c(j));
    qubits.push_back(c(j + 1));
    if (!last) qubits.push_back(c(j + 2));
    h.terms.push_back({std::move(qubits), std::move(m), "prop_" + std::to_string(j)});
  }
  return h;
}

StateVector clock_state(int t, int L) {
  if (t < 0 || t > L) throw ContractError("clock time out of range");
  const int width = L + 1;
  Index idx = 0;
  for (int k = 0; k <= t; ++k) idx |= qubit_mask(k, width);
  return basis_state(width, idx);
}

StateVector history_state(const QuantumCircuit& circuit, double s) {
  check_s(s, "history_state");
  const int L = circuit.size();
  const double r = std::sqrt(s / (1.0 - s));
  StateVector out = StateVector::Zero(Eigen::Index(1) << (circuit.num_qubits() + L + 1));
  StateVector psi = basis_state(circuit.num_qubits(), 0);
  double weight = 1.0;
  for (int j = 0; j <= L; ++j) {
    if (j > 0) {
      psi = circuit.state_after(j);
      weight *= r;
    }
    if (weight == 0.0) break;
    out += weight * kron(psi, clock_state(j, L));
  }
  return out / out.norm();
}

BlockMatrix block_matrix(int hamming_weight, double s, int L) {
  check_s(s, "block_matrix");
  if (hamming_weight < 0) throw ContractError("block_matrix: negative Hamming weight");
  if (L < 1) throw ContractError("block_matrix: L must be at least 1");
  const double b = std::sqrt(s * (1.0 - s));
  BlockMatrix m{L, hamming_weight, s, Eigen::MatrixXd::Zero(L + 1, L + 1)};
  m.entries.diagonal().setOnes();
  m.entries(0, 0) = s + hamming_weight;
  m.entries(L, L) = 1.0 - s;
  for (int j = 0; j < L; ++j) m.entries(j, j + 1) = m.entries(j + 1, j) = -b;
  return m;
}

GapFormulas gap_formulas(double s, int L) {
  check_s(s, "gap_formulas");
  const double b = std::sqrt(s * (1.0 - s));
  return {1.0 - 2.0 * b * std::cos(std::numbers::pi / (L + 1)),
          1.0 - 2.0 * b * std::cos(std::numbers::pi / (2.0 * (L + 1)))};
}

StochasticFFTerms build_stochastic_ff(const QuantumCircuit& circuit, double s, double p) {
  for (std::size_t j = 0; j < circuit.gates().size(); ++j) {
    const Gate& g = circuit.gates()[j];
    if (!g.is_real()) {
      throw ContractError("build_stochastic_ff: gate " + std::to_string(j + 1) + " " + g.describe() +
                          " has complex entries");
    }
  }
  return stochastize_ff(build_ff(circuit, s).term_hamiltonians(), p);
}

}  // namespace stoqkit
