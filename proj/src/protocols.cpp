#include "stoqkit/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stoqkit/errors.hpp"
#include "stoqkit/sign_elimination.hpp"
#include "stoqkit/spectral.hpp"

namespace stoqkit {

namespace {

struct SignedPermutation {
  std::vector<int> image;
  int sign;
};

std::vector<SignedPermutation> permutations(int c) {
  std::vector<int> perm(c);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<SignedPermutation> out;
  do {
    int inversions = 0;
    for (int i = 0; i < c; ++i) {
      for (int j = i + 1; j < c; ++j) inversions += perm[i] > perm[j];
    }
    out.push_back({perm, inversions % 2 ? -1 : 1});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Index ipow(Index base, int exp) {
  Index out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

// Index of the product state whose register i holds digit[i], register 0 leftmost.
Index compose(const std::vector<Index>& digits, Index d) {
  Index idx = 0;
  for (Index x : digits) idx = idx * d + x;
  return idx;
}

std::vector<Index> decompose(Index idx, Index d, int c) {
  std::vector<Index> digits(c);
  for (int i = c - 1; i >= 0; --i) {
    digits[i] = idx % d;
    idx /= d;
  }
  return digits;
}

// Register count c with d^c = size, or -1.
int register_count(Index size, Index d) {
  if (d < 2) return size == 1 ? 0 : -1;
  int c = 0;
  while (size > 1 && size % d == 0) {
    size /= d;
    ++c;
  }
  return size == 1 ? c : -1;
}

bool is_power_of_two(Index d) { return d > 0 && (d & (d - 1)) == 0; }

int log2_exact(Index d) {
  int k = 0;
  while ((Index{1} << k) < d) ++k;
  return k;
}

}  // namespace

std::string to_string(SatClass c) {
  switch (c) {
    case SatClass::Quantum: return "quantum";
    case SatClass::Stoquastic: return "stoquastic";
    case SatClass::Stochastic: return "stochastic";
  }
  return "?";
}

SatClass sat_class_from_string(const std::string& s) {
  for (SatClass c : {SatClass::Quantum, SatClass::Stoquastic, SatClass::Stochastic}) {
    if (to_string(c) == s) return c;
  }
  throw ContractError("unknown instance class '" + s + "'");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "YES";
    case Verdict::No: return "NO";
    case Verdict::Ambiguous: return "AMBIGUOUS";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// SAT

SatInstance::SatInstance(int num_qubits, std::vector<OperatorMatrix> operators, double epsilon,
                         SatClass tag)
    : num_qubits_(num_qubits), operators_(std::move(operators)), epsilon_(epsilon), tag_(tag) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ContractError("SAT instance: epsilon must be positive");
  for (std::size_t j = 0; j < operators_.size(); ++j) {
    const auto& op = operators_[j];
    const std::string where = "SAT instance operator " + std::to_string(j);
    if (op.num_qubits() != num_qubits) throw ContractError(where + " acts on the wrong register");
    const MatrixClassFlags f = classify(op);
    if (!f.psd) throw ContractError(where + " is not positive semidefinite");
    if (tag == SatClass::Stoquastic && !f.stoquastic) throw ContractError(where + " is not stoquastic");
    if (tag == SatClass::Stochastic && !f.column_stochastic) throw ContractError(where + " is not stochastic");
  }
}

OperatorMatrix SatInstance::sum() const {
  OperatorMatrix total(num_qubits_);
  for (const auto& op : operators_) total = total + op;
  return total;
}

SatInstance reduce_qsat(const SatInstance& instance, double p) {
  if (instance.m() == 0) throw ContractError("reduce_qsat: instance has no operators");
  const int n = instance.num_qubits();
  std::vector<OperatorMatrix> reduced;
  double n_max = 0.0;
  for (std::size_t j = 0; j < instance.m(); ++j) {
    const OperatorMatrix& op = instance.operators()[j];
    if (!classify(op).projector) {
      throw ContractError("reduce_qsat: operator " + std::to_string(j) +
                          " is not a projector; apply kernel_projector_complement first");
    }
    const LocalHamiltonian h = pauli_decompose(op.dense(), n);
    if (h.empty()) throw ContractError("reduce_qsat: operator " + std::to_string(j) + " is zero");
    n_max = std::max(n_max, h.norm_sum());
    reduced.push_back(mix_ancilla_penalty(stochastize_complex(h).first, p).realize());
  }
  const double eps = p * instance.epsilon() / (static_cast<double>(instance.m()) * n_max);
  SatInstance out(n + 2, std::move(reduced), eps, SatClass::Stochastic);
  out.n_max = n_max;
  out.source_epsilon = instance.epsilon();
  return out;
}

SatDecision decide_sat(const SatInstance& instance, double tol) {
  const double e0 = instance.m() ? min_eigenvalue(instance.sum()) : 0.0;
  Verdict v = Verdict::Ambiguous;
  if (e0 <= tol) {
    v = Verdict::Yes;
  } else if (e0 >= instance.epsilon() - tol) {
    v = Verdict::No;
  }
  return {v, e0, instance.epsilon()};
}

// ---------------------------------------------------------------------------
// Excited states

LocalHamiltonian build_Hc(int c, int n) {
  if (c < 1) throw ContractError("build_Hc: c must be at least 1");
  const int d = c == 1 ? 0 : log2_exact(static_cast<Index>(c));
  if (n < d + 1) {
    throw ContractError("build_Hc: needs at least " + std::to_string(d + 1) + " qubits for c = " +
                        std::to_string(c));
  }
  std::vector<std::pair<double, PauliString>> terms;
  double shift = -(c - 0.5);
  for (int k = 0; k < n; ++k) {
    const double w = std::ldexp(1.0, std::min(k, d + 1));
    terms.emplace_back(0.5 * w, PauliString::single(k, Pauli::Z));
    shift += 0.5 * w;
  }
  terms.emplace_back(shift, PauliString());
  return LocalHamiltonian(n, terms);
}

LocalHamiltonian direct_sum(const LocalHamiltonian& a, const LocalHamiltonian& b) {
  if (a.num_qubits() != b.num_qubits()) throw ContractError("direct_sum: register sizes differ");
  const int n = a.num_qubits();
  std::vector<std::pair<double, PauliString>> terms;
  auto add = [&](const LocalHamiltonian& h, int z_sign) {
    for (const auto& [coeff, s] : h.signed_terms()) {
      auto factors = s.factors();
      terms.emplace_back(0.5 * coeff, s);
      factors.emplace(n, Pauli::Z);
      terms.emplace_back(0.5 * z_sign * coeff, PauliString(factors, s.sign()));
    }
  };
  add(a, 1);
  add(b, -1);
  return LocalHamiltonian(n + 1, terms);
}

StateVector slater_witness(const std::vector<StateVector>& states) {
  if (states.empty()) throw ContractError("slater_witness: no states");
  const int c = static_cast<int>(states.size());
  const auto d = static_cast<Index>(states.front().size());
  for (int i = 0; i < c; ++i) {
    if (static_cast<Index>(states[i].size()) != d) throw ContractError("slater_witness: dimension mismatch");
    for (int j = 0; j <= i; ++j) {
      const Complex overlap = states[i].dot(states[j]);
      if (std::abs(overlap - (i == j ? 1.0 : 0.0)) > 1e-10) {
        throw ContractError("slater_witness: input states are not orthonormal");
      }
    }
  }
  const Index dim = ipow(d, c);
  if (dim > kMaxWitnessDim) {
    throw ResourceError("slater_witness: witness dimension " + std::to_string(dim) + " exceeds limit");
  }
  StateVector out = StateVector::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& perm : permutations(c)) {
    StateVector product = StateVector::Ones(1);
    for (int i = 0; i < c; ++i) product = kron(product, states[perm.image[i]]);
    out += static_cast<double>(perm.sign) * product;
  }
  return out / std::sqrt(static_cast<double>(permutations(c).size()));
}

OperatorMatrix antisym_projector(int d, int c) {
  if (d < 1 || c < 1) throw ContractError("antisym_projector: d and c must be positive");
  if (c > d) throw ContractError("antisym_projector: c > d leaves an empty antisymmetric subspace");
  if (!is_power_of_two(static_cast<Index>(d))) throw ContractError("antisym_projector: d must be a power of 2");
  const Index dim = ipow(static_cast<Index>(d), c);
  if (dim > kMaxWitnessDim) {
    throw ResourceError("antisym_projector: dimension " + std::to_string(dim) + " exceeds limit");
  }
  const auto perms = permutations(c);
  const double norm = 1.0 / static_cast<double>(perms.size());
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(dim * perms.size());
  for (Index col = 0; col < dim; ++col) {
    const auto digits = decompose(col, static_cast<Index>(d), c);
    // Distinct digits only; repeated ones cancel.
    auto sorted = digits;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    std::vector<Index> moved(c);
    for (const auto& perm : perms) {
      for (int i = 0; i < c; ++i) moved[i] = digits[perm.image[i]];
      triplets.emplace_back(static_cast<Eigen::Index>(compose(moved, static_cast<Index>(d))),
                            static_cast<Eigen::Index>(col), perm.sign * norm);
    }
  }
  return OperatorMatrix::from_triplets(c * log2_exact(static_cast<Index>(d)), triplets);
}

double lemma1_value(const StateVector& phi, const StateVector& alpha) {
  const auto d = static_cast<Index>(alpha.size());
  const int c = register_count(static_cast<Index>(phi.size()), d);
  if (c < 1) throw ContractError("lemma1_value: phi is not a state on copies of the alpha register");
  if (std::abs(alpha.norm() - 1.0) > 1e-10) throw ContractError("lemma1_value: alpha is not normalized");
  // Antisymmetry under every adjacent swap implies it under all permutations.
  for (int k = 0; k + 1 < c; ++k) {
    StateVector swapped(phi.size());
    for (Index idx = 0; idx < static_cast<Index>(phi.size()); ++idx) {
      auto digits = decompose(idx, d, c);
      std::swap(digits[k], digits[k + 1]);
      swapped(static_cast<Eigen::Index>(compose(digits, d))) = phi(static_cast<Eigen::Index>(idx));
    }
    if ((swapped + phi).norm() > 1e-10) throw ContractError("lemma1_value: phi is not antisymmetric");
  }
  const auto rest = static_cast<Eigen::Index>(ipow(d, c - 1));
  // Register 1 is the slowest index: phi reshaped to d x d^(c-1), row-major.
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mat(
      phi.data(), static_cast<Eigen::Index>(d), rest);
  return (alpha.adjoint() * mat).squaredNorm();
}

ExcitedDecision decide_excited(const ExcitedEnergyProblem& problem) {
  if (problem.c < 1) throw ContractError("excited energy problem: c must be at least 1");
  if (!(problem.b > problem.a)) throw ContractError("excited energy problem: requires b > a");
  const OperatorMatrix m = build_matrix(problem.h);
  if (static_cast<Index>(problem.c) > m.dim()) throw ContractError("excited energy problem: c exceeds dimension");
  const Spectrum spec = eig_dense(m, {kDefaultDenseCap, false});
  const double lc = spec.eigenvalues[problem.c - 1];
  Verdict v = Verdict::Ambiguous;
  if (lc <= problem.a) {
    v = Verdict::Yes;
  } else if (lc >= problem.b) {
    v = Verdict::No;
  }
  return {v, lc};
}

AcceptanceReport acceptance_operator(const LocalHamiltonian& h, int c, double threshold) {
  if (c < 1) throw ContractError("acceptance_operator: c must be at least 1");
  const OperatorMatrix m = build_matrix(h);
  const Index d = m.dim();
  if (static_cast<Index>(c) > d) throw ContractError("acceptance_operator: c exceeds the register dimension");
  const Index dim = ipow(d, c);
  if (dim > kMaxWitnessDim) {
    throw ResourceError("acceptance_operator: witness space needs dimension " + std::to_string(dim) +
                        ", limit is " + std::to_string(kMaxWitnessDim));
  }

  const Spectrum spec = eig_dense(m);
  DenseMatrix energy_proj = DenseMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  AcceptanceReport report;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    if (spec.eigenvalues[j] <= threshold) {
      const auto v = spec.eigenvectors->col(static_cast<Eigen::Index>(j));
      energy_proj += v * v.adjoint();
      ++report.eigenvalues_below;
    }
  }

  // Slater basis of the antisymmetric subspace built from computational
  // basis states, each reshaped to d x d^(c-1) with register 1 as rows.
  const auto perms = permutations(c);
  const double norm = 1.0 / std::sqrt(static_cast<double>(perms.size()));
  const auto rest = static_cast<Eigen::Index>(ipow(d, c - 1));
  std::vector<DenseMatrix> basis;
  std::vector<Index> subset(c);
  std::vector<bool> mask(d, false);
  std::fill(mask.begin(), mask.begin() + c, true);
  do {
    int k = 0;
    for (Index x = 0; x < d; ++x) {
      if (mask[x]) subset[k++] = x;
    }
    DenseMatrix slater = DenseMatrix::Zero(static_cast<Eigen::Index>(d), rest);
    std::vector<Index> digits(c);
    for (const auto& perm : perms) {
      for (int i = 0; i < c; ++i) digits[i] = subset[perm.image[i]];
      const Index idx = compose(digits, d);
      slater(static_cast<Eigen::Index>(idx / static_cast<Index>(rest)),
             static_cast<Eigen::Index>(idx % static_cast<Index>(rest))) += perm.sign * norm;
    }
    basis.push_back(std::move(slater));
  } while (std::prev_permutation(mask.begin(), mask.end()));

  const auto r = static_cast<Eigen::Index>(basis.size());
  DenseMatrix block(r, r);
  std::vector<DenseMatrix> projected;
  projected.reserve(basis.size());
  for (const auto& b : basis) projected.push_back(energy_proj * b);
  for (Eigen::Index f = 0; f < r; ++f) {
    for (Eigen::Index g = 0; g < r; ++g) block(f, g) = basis[f].conjugate().cwiseProduct(projected[g]).sum();
  }
  block = 0.5 * (block + block.adjoint());
  const Spectrum bs = eig_dense_hermitian(block, true);
  report.probability = std::clamp(bs.eigenvalues.back(), 0.0, 1.0);
  const StateVector y = bs.eigenvectors->col(r - 1);
  report.witness = StateVector::Zero(static_cast<Eigen::Index>(dim));
  for (Eigen::Index f = 0; f < r; ++f) {
    Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w(
        report.witness.data(), static_cast<Eigen::Index>(d), rest);
    w += y(f) * basis[f];
  }
  report.bound = 1.0 - 1.0 / c;
  report.margin = report.bound - report.probability;
  return report;
}

}  // namespace stoqkit
