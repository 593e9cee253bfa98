#include "stoqkit/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "stoqkit/errors.hpp"
#include "stoqkit/sign_elimination.hpp"

namespace stoqkit {

namespace {

double ground_overlap(const Spectrum& spec, const StateVector& psi) {
  const auto groups = multiplets(spec.eigenvalues);
  double total = 0.0;
  for (std::size_t j : groups.front()) total += std::norm(spec.eigenvectors->col(j).dot(psi));
  return total;
}

Spectrum hermitian_spectrum(const OperatorMatrix& h, Index dense_cap, double u) {
  if (h.dim() > dense_cap) {
    throw ResourceError("evolve: dimension " + std::to_string(h.dim()) + " exceeds dense cap " +
                        std::to_string(dense_cap));
  }
  if (!h.is_hermitian()) {
    throw ContractError("evolve: generator is not Hermitian at u = " + std::to_string(u));
  }
  return eig_dense_hermitian(h.dense(), true);
}

}  // namespace

double sector_population(const StateVector& state, const StateVector& ancilla) {
  const Eigen::Index a = ancilla.size();
  if (a == 0 || state.size() % a != 0) throw ContractError("ancilla does not divide the state dimension");
  double total = 0.0;
  for (Eigen::Index w = 0; w < state.size() / a; ++w) {
    total += std::norm(ancilla.dot(state.segment(w * a, a)));
  }
  return total;
}

AdiabaticTrace evolve(const HamiltonianPath& path, double total_time, int steps,
                      const StateVector& initial, Index dense_cap) {
  if (steps < 1) throw ContractError("evolve: steps must be at least 1");
  if (!(total_time >= 0.0)) throw ContractError("evolve: total time must be nonnegative");
  if (std::abs(initial.norm() - 1.0) > 1e-8) throw ContractError("evolve: initial state is not normalized");
  if (!path.generator) throw ContractError("evolve: path has no generator");

  auto schedule = [&](double x) { return path.schedule ? path.schedule(x) : x; };
  AdiabaticTrace trace;
  trace.has_protected_sector = path.protected_sector.has_value();
  StateVector psi = initial;
  const double dt = total_time / steps;

  auto sample = [&](double t, double u) {
    trace.times.push_back(t);
    trace.u.push_back(u);
    trace.norms.push_back(psi.norm());
    if (path.target) {
      trace.target_overlap.push_back(std::norm(path.target(u).dot(psi)));
    } else {
      trace.target_overlap.push_back(ground_overlap(hermitian_spectrum(path.generator(u), dense_cap, u), psi));
    }
    if (path.protected_sector) {
      trace.sector_population.push_back(sector_population(psi, path.protected_sector->ancilla));
    }
  };

  sample(0.0, schedule(0.0));
  for (int k = 0; k < steps; ++k) {
    const double u_mid = schedule((k + 0.5) / steps);
    const OperatorMatrix h = path.generator(u_mid);
    if (h.dim() != static_cast<Index>(psi.size())) throw ContractError("evolve: generator dimension mismatch");
    const Spectrum spec = hermitian_spectrum(h, dense_cap, u_mid);
    const auto& v = *spec.eigenvectors;
    StateVector coeffs = v.adjoint() * psi;
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
      coeffs(j) *= std::exp(Complex(0.0, -spec.eigenvalues[j] * dt));
    }
    psi = v * coeffs;
    sample((k + 1) * dt, schedule(static_cast<double>(k + 1) / steps));
  }
  trace.final_state = psi;
  return trace;
}

double sector_leakage(const AdiabaticTrace& trace) {
  if (!trace.has_protected_sector) throw ContractError("sector_leakage: path had no protected sector");
  return 1.0 - *std::min_element(trace.sector_population.begin(), trace.sector_population.end());
}

DecodeResult measure_and_decode(const StateVector& final_state, const QuantumCircuit& circuit,
                                int shots, std::uint64_t seed, bool padded) {
  if (shots < 0) throw ContractError("measure_and_decode: shots must be nonnegative");
  const int n = circuit.num_qubits();
  const int L = circuit.size();
  const int clock_len = padded ? 2 * L : L;
  const int clock_bits = clock_len + 1;
  if (final_state.size() != (Eigen::Index(1) << (n + clock_bits))) {
    throw ContractError("measure_and_decode: state does not match the " +
                        std::string(padded ? "padded " : "") + "work+clock layout");
  }

  // Clock index -> time, or -1 for non-unary patterns.
  std::vector<int> time_of(Index{1} << clock_bits, -1);
  for (int t = 0; t <= clock_len; ++t) {
    Index idx = 0;
    for (int k = 0; k <= t; ++k) idx |= qubit_mask(k, clock_bits);
    time_of[idx] = t;
  }
  DecodeResult out;
  out.clock_threshold = L;
  const Index clock_mask = (Index{1} << clock_bits) - 1;
  auto success = [&](Index i) { return time_of[i & clock_mask] >= out.clock_threshold; };

  const Index work_dim = Index{1} << n;
  std::vector<double> weights(final_state.size());
  out.exact_distribution.assign(work_dim, 0.0);
  for (Eigen::Index i = 0; i < final_state.size(); ++i) {
    weights[i] = std::norm(final_state(i));
    if (success(static_cast<Index>(i))) {
      out.success_probability += weights[i];
      out.exact_distribution[static_cast<Index>(i) >> clock_bits] += weights[i];
    }
  }
  if (out.success_probability > 0.0) {
    for (double& x : out.exact_distribution) x /= out.success_probability;
  }

  out.shots = shots;
  std::mt19937_64 rng(seed);
  std::discrete_distribution<Index> pick(weights.begin(), weights.end());
  std::vector<double> counts(work_dim, 0.0);
  for (int k = 0; k < shots; ++k) {
    const Index i = pick(rng);
    if (success(i)) {
      ++out.successes;
      counts[i >> clock_bits] += 1.0;
    }
  }
  out.success_frequency = shots ? static_cast<double>(out.successes) / shots : 0.0;
  if (out.successes > 0) {
    for (double& x : counts) x /= out.successes;
    out.sampled_distribution = std::move(counts);
  }
  return out;
}

std::vector<double> output_distribution(const QuantumCircuit& circuit) {
  const StateVector psi = circuit.simulate();
  std::vector<double> out(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) out[i] = std::norm(psi(i));
  return out;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ContractError("total_variation: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

HamiltonianPath ff_path(const QuantumCircuit& circuit) {
  HamiltonianPath path;
  path.generator = [circuit](double u) { return build_ff(circuit, 0.5 * u).realize(); };
  path.target = [circuit](double u) { return history_state(circuit, 0.5 * u); };
  return path;
}

HamiltonianPath linear_path(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.num_qubits() != b.num_qubits()) throw ContractError("linear_path: register mismatch");
  HamiltonianPath path;
  path.generator = [a, b](double u) { return a.scaled(1.0 - u) + b.scaled(u); };
  return path;
}

HamiltonianPath stoquastized_path(const LocalHamiltonian& a, const LocalHamiltonian& b) {
  if (a.num_qubits() != b.num_qubits()) throw ContractError("stoquastized_path: register mismatch");
  auto mix = [a, b](double u) { return a.scaled(1.0 - u) + b.scaled(u); };
  HamiltonianPath path;
  path.generator = [mix](double u) { return stoquastize(mix(u)).realize(); };
  path.protected_sector = ProtectedSector{to_string(Sector::Minus), sector_state(Sector::Minus)};
  path.target = [mix](double u) {
    const Spectrum spec = eig_dense_hermitian(build_matrix(mix(u)).dense(), true);
    return StateVector(kron(spec.eigenvectors->col(0), sector_state(Sector::Minus)));
  };
  return path;
}

}  // namespace stoqkit
