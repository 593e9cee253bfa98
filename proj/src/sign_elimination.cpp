#include "stoqkit/sign_elimination.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "stoqkit/errors.hpp"
#include "stoqkit/spectral.hpp"

namespace stoqkit {

namespace {

constexpr Complex kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// Image of ancilla basis state `a` under the representation of i^phase.
Index ancilla_image(MapKind kind, int phase, Index a) {
  if (kind == MapKind::Complex) {
    // F|l> = |l - 1 mod 4>, and i^k maps to F^k.
    return (a + 4 - static_cast<Index>(phase)) % 4;
  }
  // Z2: +1 -> identity, -1 -> X.
  return phase == 2 ? a ^ 1U : a;
}

// Phases i^k appearing among the entries of a string.
std::set<int> entry_phases(const PauliString& s) {
  std::vector<int> support;
  for (const auto& [q, p] : s.factors()) support.push_back(q);
  std::vector<int> map(support.empty() ? 0 : support.back() + 1, 0);
  for (std::size_t i = 0; i < support.size(); ++i) map[support[i]] = static_cast<int>(i);
  const PauliString local = s.remapped(map);
  const int w = static_cast<int>(support.size());
  std::set<int> phases;
  for (Index col = 0; col < (Index{1} << w); ++col) phases.insert(local.apply_to_basis(col, w).phase);
  return phases;
}

void check_real(const LocalHamiltonian& h, const char* op) {
  for (const auto& t : h.terms()) {
    if (!t.string.is_real()) {
      throw ContractError(std::string(op) + ": term " + t.string.to_string() +
                          " has imaginary entries; use stochastize_complex");
    }
  }
}

SparseMatrix sector_isometry(int work_qubits, const StateVector& ancilla) {
  const Index work_dim = Index{1} << work_qubits;
  const auto anc_dim = static_cast<Index>(ancilla.size());
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (Index w = 0; w < work_dim; ++w) {
    for (Index a = 0; a < anc_dim; ++a) {
      const Complex v = ancilla(static_cast<Eigen::Index>(a));
      if (v != 0.0) {
        triplets.emplace_back(static_cast<Eigen::Index>(w * anc_dim + a), static_cast<Eigen::Index>(w), v);
      }
    }
  }
  SparseMatrix iso(static_cast<Eigen::Index>(work_dim * anc_dim), static_cast<Eigen::Index>(work_dim));
  iso.setFromTriplets(triplets.begin(), triplets.end());
  return iso;
}

}  // namespace

std::string to_string(Sector s) {
  switch (s) {
    case Sector::Minus: return "minus";
    case Sector::Plus: return "plus";
    case Sector::V0: return "v0";
    case Sector::V1: return "v1";
    case Sector::V2: return "v2";
    case Sector::V3: return "v3";
  }
  return "?";
}

Sector sector_from_string(const std::string& s) {
  for (Sector c : {Sector::Minus, Sector::Plus, Sector::V0, Sector::V1, Sector::V2, Sector::V3}) {
    if (to_string(c) == s) return c;
  }
  throw ContractError("unknown sector label '" + s + "'");
}

std::string to_string(MapKind k) {
  switch (k) {
    case MapKind::Stoquastic: return "stoquastic";
    case MapKind::Stochastic: return "stochastic";
    case MapKind::Complex: return "complex";
  }
  return "?";
}

StateVector sector_state(Sector s) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (s) {
    case Sector::Minus: return (StateVector(2) << h, -h).finished();
    case Sector::Plus: return (StateVector(2) << h, h).finished();
    default: break;
  }
  const int j = static_cast<int>(s) - static_cast<int>(Sector::V0);
  StateVector v(4);
  for (int l = 0; l < 4; ++l) v(l) = 0.5 * kPhases[(l * j) % 4];
  return v;
}

int MappedHamiltonian::locality() const {
  int k = penalty ? 1 : 0;
  for (const auto& t : terms) {
    const std::set<int> phases = entry_phases(t.string);
    int anc = 0;
    if (kind == MapKind::Complex) {
      const bool odd = phases.count(1) || phases.count(3);
      if (odd) {
        anc = 2;
      } else if (phases.count(2)) {
        anc = 1;  // F^2 flips only the high ancilla bit
      }
    } else if (phases.count(2)) {
      anc = 1;
    }
    k = std::max(k, t.string.weight() + anc);
  }
  return k;
}

OperatorMatrix MappedHamiltonian::realize() const {
  const int n = work_qubits;
  const Index work_dim = Index{1} << n;
  const Index anc_dim = Index{1} << ancilla_count;
  const double mix = penalty.value_or(1.0);
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(terms.size() * work_dim * anc_dim + (penalty ? 2 * work_dim * anc_dim : 0));
  for (const auto& term : terms) {
    const double value = mix * scale * term.weight;
    for (Index col = 0; col < work_dim; ++col) {
      const auto image = term.string.apply_to_basis(col, n);
      for (Index a = 0; a < anc_dim; ++a) {
        const Index a2 = ancilla_image(kind, image.phase, a);
        triplets.emplace_back(static_cast<Eigen::Index>(image.row * anc_dim + a2),
                              static_cast<Eigen::Index>(col * anc_dim + a), value);
      }
    }
  }
  if (penalty) {
    // (1 - p)(1 + X)/2 on the first ancilla, the most significant ancilla bit.
    const double half = 0.5 * (1.0 - mix);
    const Index flip = anc_dim >> 1;
    for (Index i = 0; i < work_dim * anc_dim; ++i) {
      triplets.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), half);
      triplets.emplace_back(static_cast<Eigen::Index>(i ^ flip), static_cast<Eigen::Index>(i), half);
    }
  }
  return OperatorMatrix::from_triplets(total_qubits(), triplets);
}

MappedHamiltonian stoquastize(const LocalHamiltonian& h) {
  check_real(h, "stoquastize");
  MappedHamiltonian m;
  m.kind = MapKind::Stoquastic;
  m.work_qubits = h.num_qubits();
  m.ancilla_count = 1;
  m.normalization = h.norm_sum();
  m.scale = -1.0;
  // H = -sum alpha_k T_k, so T_k is the negated signed string.
  for (const auto& t : h.terms()) m.terms.push_back({t.alpha, t.string.negated()});
  m.sectors = {Sector::Minus, Sector::Plus};
  return m;
}

MappedHamiltonian stochastize(const LocalHamiltonian& h) {
  check_real(h, "stochastize");
  if (h.empty()) throw ContractError("stochastize: empty Hamiltonian has N = 0");
  MappedHamiltonian m;
  m.kind = MapKind::Stochastic;
  m.work_qubits = h.num_qubits();
  m.ancilla_count = 1;
  m.normalization = h.norm_sum();
  m.scale = 1.0 / m.normalization;
  for (const auto& t : h.terms()) m.terms.push_back({t.alpha, t.string});
  m.sectors = {Sector::Minus, Sector::Plus};
  return m;
}

MappedHamiltonian mix_ancilla_penalty(const MappedHamiltonian& mapped, double p) {
  if (mapped.kind == MapKind::Stoquastic) {
    throw ContractError("penalty requires a normalized (stochastic) map");
  }
  if (mapped.penalty) throw ContractError("penalty already applied");
  if (!(p > 0.0 && p < 1.0)) throw ContractError("penalty parameter p must satisfy 0 < p < 1");
  MappedHamiltonian out = mapped;
  out.penalty = p;
  out.separation_warning = p >= 1.0 / 3.0;
  return out;
}

MappedHamiltonian add_ancilla_penalty(const MappedHamiltonian& mapped, double p) {
  if (mapped.kind != MapKind::Stochastic) {
    throw ContractError("add_ancilla_penalty expects the output of stochastize");
  }
  return mix_ancilla_penalty(mapped, p);
}

std::pair<MappedHamiltonian, SectorDecomposition> stochastize_complex(const LocalHamiltonian& h) {
  if (h.empty()) throw ContractError("stochastize_complex: empty Hamiltonian has N = 0");
  const int n = h.num_qubits();
  MappedHamiltonian m;
  m.kind = MapKind::Complex;
  m.work_qubits = n;
  m.ancilla_count = 2;
  m.normalization = h.norm_sum();
  m.scale = 1.0 / m.normalization;
  for (const auto& t : h.terms()) m.terms.push_back({t.alpha, t.string});
  m.sectors = {Sector::V0, Sector::V1, Sector::V2, Sector::V3};

  // alpha_j O_j = S_j + i A_j; split each into entrywise positive and
  // negative parts.
  const Index d = Index{1} << n;
  std::vector<Eigen::Triplet<Complex>> s_plus, s_minus, a_plus, a_minus;
  for (const auto& t : h.terms()) {
    for (Index col = 0; col < d; ++col) {
      const auto image = t.string.apply_to_basis(col, n);
      const Eigen::Triplet<Complex> entry(static_cast<Eigen::Index>(image.row),
                                          static_cast<Eigen::Index>(col), t.alpha);
      switch (image.phase) {
        case 0: s_plus.push_back(entry); break;
        case 1: a_plus.push_back(entry); break;
        case 2: s_minus.push_back(entry); break;
        default: a_minus.push_back(entry); break;
      }
    }
  }
  const OperatorMatrix sp = OperatorMatrix::from_triplets(n, s_plus);
  const OperatorMatrix sm = OperatorMatrix::from_triplets(n, s_minus);
  const OperatorMatrix ap = OperatorMatrix::from_triplets(n, a_plus);
  const OperatorMatrix am = OperatorMatrix::from_triplets(n, a_minus);
  const Complex i(0.0, 1.0);
  SectorDecomposition dec{{
      sp + sm + ap + am,
      sp - sm + ap.scaled(i) - am.scaled(i),
      sp + sm - ap - am,
      sp - sm - ap.scaled(i) + am.scaled(i),
  }};
  return {std::move(m), std::move(dec)};
}

MappedHamiltonian add_penalty_complex(const MappedHamiltonian& mapped, double p) {
  if (mapped.kind != MapKind::Complex) {
    throw ContractError("add_penalty_complex expects the output of stochastize_complex");
  }
  if (!(p > 0.0 && p < 1.0 / 3.0)) {
    throw ContractError("add_penalty_complex requires 0 < p < 1/3");
  }
  return mix_ancilla_penalty(mapped, p);
}

OperatorMatrix StochasticFFTerms::sum() const {
  if (terms.empty()) throw ContractError("empty term list");
  OperatorMatrix total(terms.front().num_qubits());
  for (const auto& t : terms) total = total + t;
  return total;
}

OperatorMatrix StochasticFFTerms::unweighted(std::size_t j) const {
  if (j >= terms.size()) throw ContractError("term index out of range");
  if (term_norms[j] <= 0.0) throw ContractError("term " + std::to_string(j) + " is zero");
  return terms[j].scaled(normalization / term_norms[j]);
}

StochasticFFTerms stochastize_ff(const std::vector<LocalHamiltonian>& terms, double p) {
  if (terms.empty()) throw ContractError("stochastize_ff: empty term list");
  if (!(p > 0.0 && p < 1.0 / 3.0)) throw ContractError("stochastize_ff requires 0 < p < 1/3");
  const int n = terms.front().num_qubits();
  bool real = true;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const auto& h = terms[j];
    if (h.num_qubits() != n) throw ContractError("stochastize_ff: terms act on different registers");
    if (!h.is_real()) real = false;
    if (!h.empty() && min_eigenvalue(build_matrix(h)) < -kDefaultTol) {
      throw ContractError("stochastize_ff: term " + std::to_string(j) + " is not positive semidefinite");
    }
  }

  StochasticFFTerms out;
  out.kind = real ? MapKind::Stochastic : MapKind::Complex;
  out.ancilla_count = real ? 1 : 2;
  for (const auto& h : terms) {
    out.term_norms.push_back(h.norm_sum());
    out.normalization += h.norm_sum();
  }
  if (out.normalization <= 0.0) throw ContractError("stochastize_ff: all terms are zero");

  for (std::size_t j = 0; j < terms.size(); ++j) {
    const double weight = out.term_norms[j] / out.normalization;
    if (terms[j].empty()) {
      out.terms.emplace_back(n + out.ancilla_count);
      continue;
    }
    const MappedHamiltonian mapped = real ? stochastize(terms[j]) : stochastize_complex(terms[j]).first;
    out.terms.push_back(mix_ancilla_penalty(mapped, p).realize().scaled(weight));
  }
  return out;
}

DenseMatrix sector_restriction(const MappedHamiltonian& mapped, Sector sector) {
  if (std::find(mapped.sectors.begin(), mapped.sectors.end(), sector) == mapped.sectors.end()) {
    throw ContractError("sector '" + to_string(sector) + "' is not an invariant sector of this " +
                        to_string(mapped.kind) + " map");
  }
  const SparseMatrix iso = sector_isometry(mapped.work_qubits, sector_state(sector));
  const SparseMatrix m = mapped.realize().sparse();
  return DenseMatrix(SparseMatrix(iso.adjoint()) * m * iso);
}

std::vector<double> sector_spectrum(const MappedHamiltonian& mapped, Sector sector) {
  const DenseMatrix block = sector_restriction(mapped, sector);
  return eig_dense_hermitian(0.5 * (block + block.adjoint()), false).eigenvalues;
}

}  // namespace stoqkit
