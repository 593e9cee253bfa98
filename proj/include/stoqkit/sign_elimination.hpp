#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stoqkit/operator_core.hpp"

namespace stoqkit {

// Which regular representation replaces the scalar entries of each term.
enum class MapKind {
  Stoquastic,  // Z2, -sum alpha T~, unnormalized
  Stochastic,  // Z2, (1/N) sum alpha S~
  Complex,     // Z4, (1/N) sum alpha O~
};

// Invariant ancilla states: |-> and |+> for Z2 maps, eigenvectors v_j of the
// 4-cycle F for the Z4 map.
enum class Sector { Minus, Plus, V0, V1, V2, V3 };

std::string to_string(Sector s);
Sector sector_from_string(const std::string& s);
std::string to_string(MapKind k);

// Ancilla vector of a sector: 2 entries for |+-> and 4 for v_j.
StateVector sector_state(Sector s);

struct MappedTerm {
  double weight;
  // Generalized permutation on the work register; each of its entries
  // i^k is replaced by the k-th power of the regular representation.
  PauliString string;
};

/// Output of a sign-elimination map. Realized matrix:
///   mix * scale * sum_k weight_k * rep(string_k) + (1 - mix) * (1 + X_a) / 2
/// where X_a acts on the first ancilla and mix = penalty (or 1 when absent).
/// Ancillas occupy the highest-index qubits.
struct MappedHamiltonian {
  MapKind kind = MapKind::Stoquastic;
  int work_qubits = 0;
  int ancilla_count = 1;
  double normalization = 0.0;  // N = sum of alpha over the input terms
  double scale = 1.0;          // -1 for stoquastize, 1/N otherwise
  std::optional<double> penalty;
  // Set when the penalty parameter is outside the range where the ancilla
  // sectors are guaranteed to separate (p >= 1/3).
  bool separation_warning = false;
  std::vector<MappedTerm> terms;
  std::vector<Sector> sectors;

  int total_qubits() const { return work_qubits + ancilla_count; }
  int locality() const;
  OperatorMatrix realize() const;
};

/// Blocks H^(j) with realize() = (1/N) sum_j H^(j) (x) |v_j><v_j|, assembled
/// from the positive/negative parts of the real and imaginary parts of each
/// term. Unnormalized.
struct SectorDecomposition {
  std::array<OperatorMatrix, 4> blocks;
};

MappedHamiltonian stoquastize(const LocalHamiltonian& h);
MappedHamiltonian stochastize(const LocalHamiltonian& h);
MappedHamiltonian add_ancilla_penalty(const MappedHamiltonian& mapped, double p);
std::pair<MappedHamiltonian, SectorDecomposition> stochastize_complex(const LocalHamiltonian& h);
MappedHamiltonian add_penalty_complex(const MappedHamiltonian& mapped, double p);

// Penalty mix with only 0 < p < 1 enforced. Used where a caller fixes p at
// the edge of the separation range.
MappedHamiltonian mix_ancilla_penalty(const MappedHamiltonian& mapped, double p);

struct StochasticFFTerms {
  MapKind kind = MapKind::Stochastic;
  int ancilla_count = 1;
  double normalization = 0.0;  // N = sum_j N_j
  std::vector<double> term_norms;  // N_j
  std::vector<OperatorMatrix> terms;  // weighted by N_j / N

  OperatorMatrix sum() const;
  // terms[j] without its weight: a stochastic matrix.
  OperatorMatrix unweighted(std::size_t j) const;
};

/// Per-term map (N_j / N) [p H^_j + (1 - p)(1 + X_a)/2] of a psd term list.
/// Real input uses the Z2 map, otherwise Z4.
StochasticFFTerms stochastize_ff(const std::vector<LocalHamiltonian>& terms, double p);

// V^dagger M V with V = 1_work (x) |sector>.
DenseMatrix sector_restriction(const MappedHamiltonian& mapped, Sector sector);
std::vector<double> sector_spectrum(const MappedHamiltonian& mapped, Sector sector);

}  // namespace stoqkit
