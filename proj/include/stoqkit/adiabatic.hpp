#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stoqkit/clock.hpp"
#include "stoqkit/operator_core.hpp"
#include "stoqkit/spectral.hpp"

namespace stoqkit {

// Ancilla state on the trailing qubits whose span must stay populated.
struct ProtectedSector {
  std::string label;
  StateVector ancilla;
};

struct HamiltonianPath {
  std::function<OperatorMatrix(double)> generator;
  std::optional<ProtectedSector> protected_sector;
  // Maps t/T in [0,1] to u. Linear when empty.
  std::function<double(double)> schedule;
  // Instantaneous target state. When empty the ground vector of H(u) is used.
  std::function<StateVector(double)> target;
};

struct AdiabaticTrace {
  std::vector<double> times;
  std::vector<double> u;
  std::vector<double> target_overlap;
  std::vector<double> sector_population;  // empty without a protected sector
  std::vector<double> norms;
  StateVector final_state;
  bool has_protected_sector = false;
};

/// Piecewise-constant propagation: each step applies exp(-i H(u_mid) dt)
/// through a dense eigendecomposition. One sample per step plus t = 0.
AdiabaticTrace evolve(const HamiltonianPath& path, double total_time, int steps,
                      const StateVector& initial, Index dense_cap = kDefaultDenseCap);

double sector_population(const StateVector& state, const StateVector& ancilla);
double sector_leakage(const AdiabaticTrace& trace);

struct DecodeResult {
  int clock_threshold = 0;  // success means clock time >= this
  double success_probability = 0.0;
  std::vector<double> exact_distribution;  // work register, conditioned on success
  int shots = 0;
  int successes = 0;
  double success_frequency = 0.0;
  std::vector<double> sampled_distribution;  // empty if no success was sampled
};

/// Measures the clock register of a work+clock state. With `padded` the
/// state lives on the layout of circuit.padded(L) and any time t >= L counts
/// as success; otherwise only the all-ones clock does.
DecodeResult measure_and_decode(const StateVector& final_state, const QuantumCircuit& circuit,
                                int shots, std::uint64_t seed, bool padded);

// |<psi|x>|^2 over the work register of a direct circuit simulation.
std::vector<double> output_distribution(const QuantumCircuit& circuit);
double total_variation(const std::vector<double>& a, const std::vector<double>& b);

// H^FF(u/2) with the history state as target.
HamiltonianPath ff_path(const QuantumCircuit& circuit);
// (1-u) a + u b.
HamiltonianPath linear_path(const OperatorMatrix& a, const OperatorMatrix& b);
// stoquastize((1-u) a + u b), protected in the minus sector, with the
// minus-sector ground state as target.
HamiltonianPath stoquastized_path(const LocalHamiltonian& a, const LocalHamiltonian& b);

}  // namespace stoqkit
