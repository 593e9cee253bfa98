#pragma once

#include <string>
#include <vector>

#include "stoqkit/operator_core.hpp"
#include "stoqkit/sign_elimination.hpp"

namespace stoqkit {

enum class GateKind { CNOT, ROT, Identity, Custom };

struct Gate {
  GateKind kind = GateKind::Identity;
  std::vector<int> qubits;  // CNOT: {control, target}; ROT: {qubit}; Identity: {}
  double angle = 0.0;       // ROT only
  DenseMatrix unitary;      // Custom only, indexed big-endian over `qubits`

  static Gate cnot(int control, int target);
  static Gate rot(int qubit, double angle);
  static Gate identity();
  static Gate custom(std::vector<int> qubits, DenseMatrix unitary);

  // Matrix over `qubits` in order. [[1]] for Identity.
  DenseMatrix matrix() const;
  bool is_real() const;
  std::string describe() const;
};

class QuantumCircuit {
 public:
  QuantumCircuit(int num_qubits, std::vector<Gate> gates);

  int num_qubits() const { return num_qubits_; }
  int size() const { return static_cast<int>(gates_.size()); }
  const std::vector<Gate>& gates() const { return gates_; }

  // U_j ... U_1 |initial>; j = 0 returns the input.
  StateVector state_after(int j, const StateVector& initial) const;
  StateVector state_after(int j) const;
  StateVector simulate() const { return state_after(size()); }

  // Same circuit followed by `count` identity gates.
  QuantumCircuit padded(int count) const;

 private:
  int num_qubits_;
  std::vector<Gate> gates_;
};

/// Sum of projectors on n work qubits followed by L+1 clock qubits.
/// Work qubit j is register qubit j; clock qubit c(k), k = 1..L+1, is
/// register qubit n + k - 1.
struct FFHamiltonian {
  double s = 0.0;
  int n = 0;
  int L = 0;
  double b = 0.0;  // sqrt(s(1-s))
  double r = 0.0;  // sqrt(s/(1-s))
  std::vector<LocalOperator> terms;

  int total_qubits() const { return n + L + 1; }
  int clock_qubit(int k) const { return n + k - 1; }
  OperatorMatrix realize() const;
  // Terms as Pauli expansions on the full register.
  std::vector<LocalHamiltonian> term_hamiltonians() const;
};

FFHamiltonian build_ff(const QuantumCircuit& circuit, double s);

// Unary clock state c_t: t + 1 ones followed by zeros, on L + 1 qubits.
StateVector clock_state(int t, int L);

StateVector history_state(const QuantumCircuit& circuit, double s);

struct BlockMatrix {
  int L = 0;
  int hamming_weight = 0;
  double s = 0.0;
  Eigen::MatrixXd entries;
};

BlockMatrix block_matrix(int hamming_weight, double s, int L);

struct GapFormulas {
  double block_gap;
  double full_gap;
};

GapFormulas gap_formulas(double s, int L);

/// Stochastic images of the build_ff terms. Real gates only.
StochasticFFTerms build_stochastic_ff(const QuantumCircuit& circuit, double s, double p);

}  // namespace stoqkit
