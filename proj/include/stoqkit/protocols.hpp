#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stoqkit/operator_core.hpp"

namespace stoqkit {

enum class SatClass { Quantum, Stoquastic, Stochastic };
enum class Verdict { Yes, No, Ambiguous };

std::string to_string(SatClass c);
SatClass sat_class_from_string(const std::string& s);
std::string to_string(Verdict v);

/// Sum of psd operators with promise gap epsilon. Validated on construction:
/// each operator must be psd and carry the flags its class requires.
class SatInstance {
 public:
  SatInstance(int num_qubits, std::vector<OperatorMatrix> operators, double epsilon,
              SatClass tag = SatClass::Quantum);

  int num_qubits() const { return num_qubits_; }
  const std::vector<OperatorMatrix>& operators() const { return operators_; }
  double epsilon() const { return epsilon_; }
  SatClass tag() const { return tag_; }
  std::size_t m() const { return operators_.size(); }
  OperatorMatrix sum() const;

  // Set on reduced instances.
  std::optional<double> n_max;
  std::optional<double> source_epsilon;

 private:
  int num_qubits_;
  std::vector<OperatorMatrix> operators_;
  double epsilon_;
  SatClass tag_;
};

struct SatDecision {
  Verdict verdict;
  double ground_energy;
  double threshold;  // epsilon used for NO
};

// p defaults to 1/3. Output operators act on num_qubits + 2 qubits, with the
// Z4 ancillas last, and epsilon = p * eps / (m * N_max).
SatInstance reduce_qsat(const SatInstance& instance, double p = 1.0 / 3.0);
SatDecision decide_sat(const SatInstance& instance, double tol = kDefaultTol);

// Diagonal gadget with exactly c negative eigenvalues and smallest
// nonnegative eigenvalue 1/2.
LocalHamiltonian build_Hc(int c, int n);

// a (x) |0><0| + b (x) |1><1| on one extra trailing qubit.
LocalHamiltonian direct_sum(const LocalHamiltonian& a, const LocalHamiltonian& b);

// Antisymmetrized product of c orthonormal vectors, register 1 leftmost.
StateVector slater_witness(const std::vector<StateVector>& states);

// Projector onto the antisymmetric subspace of (C^d)^{(x) c}; d a power of 2.
OperatorMatrix antisym_projector(int d, int c);

// <phi| (|alpha><alpha| (x) 1) |phi> for antisymmetric phi.
double lemma1_value(const StateVector& phi, const StateVector& alpha);

struct ExcitedEnergyProblem {
  LocalHamiltonian h;
  int c = 1;
  double a = 0.0;
  double b = 0.0;
};

struct ExcitedDecision {
  Verdict verdict;
  double lambda_c;
};

ExcitedDecision decide_excited(const ExcitedEnergyProblem& problem);

struct AcceptanceReport {
  double probability = 0.0;  // max over antisymmetric witnesses
  StateVector witness;
  double bound = 0.0;  // 1 - 1/c
  double margin = 0.0;  // bound - probability
  int eigenvalues_below = 0;
};

inline constexpr Index kMaxWitnessDim = Index{1} << 16;

/// Exact optimum of the antisymmetric-subspace test followed by an ideal
/// energy measurement of the first register, accepting energies <= threshold.
AcceptanceReport acceptance_operator(const LocalHamiltonian& h, int c, double threshold);

}  // namespace stoqkit
