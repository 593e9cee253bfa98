#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace stoqkit {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Index = std::uint64_t;

// Qubit q of an m-qubit register is bit (m - 1 - q) of a basis index, so
// qubit 0 is the leftmost tensor factor and the highest-index qubit is the
// rightmost one. Ancillas appended after the work register are therefore the
// least significant bits: M = H (x) A.
inline Index qubit_mask(int qubit, int num_qubits) {
  return Index{1} << (num_qubits - 1 - qubit);
}

inline constexpr double kDefaultTol = 1e-10;
inline constexpr int kDefaultMaxQubits = 14;
// Coefficients at or below this magnitude are treated as structural zeros.
inline constexpr double kCoefficientCutoff = 1e-14;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_symbol(Pauli p);
Pauli pauli_from_symbol(char c);

/// Tensor product of single-qubit Paulis with an overall sign of +1 or -1.
/// Qubits absent from the factor map carry the identity.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::map<int, Pauli> factors, int sign = 1);

  static PauliString single(int qubit, Pauli p, int sign = 1);

  const std::map<int, Pauli>& factors() const { return factors_; }
  int sign() const { return sign_; }
  int weight() const { return static_cast<int>(factors_.size()); }
  int y_count() const;
  // Even number of Y factors means every matrix entry is in {0, +1, -1}.
  bool is_real() const { return y_count() % 2 == 0; }
  // -1 for the identity string.
  int max_qubit() const;

  PauliString negated() const { return PauliString(factors_, -sign_); }
  PauliString with_sign(int sign) const { return PauliString(factors_, sign); }
  // Same factors relabelled through qubit_map[old] = new.
  PauliString remapped(const std::vector<int>& qubit_map) const;

  // The string is a generalized permutation: column `col` has exactly one
  // nonzero entry, at `row`, equal to i^phase.
  struct BasisImage {
    Index row;
    int phase;  // value = i^phase, phase in {0,1,2,3}
  };
  BasisImage apply_to_basis(Index col, int num_qubits) const;

  std::string to_string() const;

  bool operator==(const PauliString&) const = default;
  auto operator<=>(const PauliString&) const = default;

 private:
  std::map<int, Pauli> factors_;
  int sign_ = 1;
};

struct HamiltonianTerm {
  double alpha;  // strictly positive
  PauliString string;
};

/// Sum of alpha * PauliString with every alpha > 0; the sign of each
/// contribution lives on its string. Duplicate strings are merged on
/// construction and exact cancellations are dropped.
class LocalHamiltonian {
 public:
  explicit LocalHamiltonian(int num_qubits = 0);
  // Coefficients may have either sign; they are folded into the strings.
  LocalHamiltonian(int num_qubits,
                   const std::vector<std::pair<double, PauliString>>& terms);

  int num_qubits() const { return num_qubits_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int locality() const;
  // Sum of alpha over all terms.
  double norm_sum() const;
  bool is_real() const;

  // Signed coefficient of the string with these factors (0 if absent).
  double coefficient(const std::map<int, Pauli>& factors) const;

  LocalHamiltonian operator+(const LocalHamiltonian& other) const;
  LocalHamiltonian scaled(double factor) const;
  // Reinterpret on a larger register, relabelling qubit q to qubit_map[q].
  LocalHamiltonian embedded(int num_qubits,
                            const std::vector<int>& qubit_map) const;

  std::vector<std::pair<double, PauliString>> signed_terms() const;

 private:
  int num_qubits_;
  std::vector<HamiltonianTerm> terms_;
};

/// Sparse complex matrix of dimension 2^m.
class OperatorMatrix {
 public:
  explicit OperatorMatrix(int num_qubits = 0);
  OperatorMatrix(int num_qubits, SparseMatrix matrix);

  static OperatorMatrix identity(int num_qubits);
  static OperatorMatrix from_dense(int num_qubits, const DenseMatrix& dense);
  static OperatorMatrix from_triplets(int num_qubits,
                                      const std::vector<Eigen::Triplet<Complex>>& triplets);

  int num_qubits() const { return num_qubits_; }
  Index dim() const { return Index{1} << num_qubits_; }
  const SparseMatrix& sparse() const { return matrix_; }
  DenseMatrix dense() const { return DenseMatrix(matrix_); }
  bool is_hermitian() const { return hermitian_; }
  bool is_real(double tol = kCoefficientCutoff) const;
  Complex at(Index row, Index col) const { return matrix_.coeff(row, col); }
  Index nonzeros() const { return static_cast<Index>(matrix_.nonZeros()); }

  StateVector apply(const StateVector& v) const { return matrix_ * v; }
  Complex expectation(const StateVector& v) const { return v.dot(matrix_ * v); }

  OperatorMatrix operator+(const OperatorMatrix& other) const;
  OperatorMatrix operator-(const OperatorMatrix& other) const;
  OperatorMatrix operator*(const OperatorMatrix& other) const;
  OperatorMatrix scaled(Complex factor) const;
  OperatorMatrix adjoint() const;
  OperatorMatrix conjugate() const;
  // this (x) other, with `other` on the trailing (least significant) qubits.
  OperatorMatrix kron(const OperatorMatrix& other) const;

  double max_abs_diff(const OperatorMatrix& other) const;
  double max_abs() const;
  double frobenius_norm() const { return matrix_.norm(); }

 private:
  int num_qubits_;
  SparseMatrix matrix_;
  bool hermitian_ = true;
};

OperatorMatrix operator*(Complex factor, const OperatorMatrix& m);

/// Dense matrix acting on an ordered list of qubits of a larger register.
/// Row/column indices of `matrix` follow `qubits` in order, big-endian.
struct LocalOperator {
  std::vector<int> qubits;
  DenseMatrix matrix;
  std::string label;

  int arity() const { return static_cast<int>(qubits.size()); }
  OperatorMatrix embed(int num_qubits) const;
  LocalHamiltonian to_hamiltonian(int num_qubits) const;
};

struct MatrixClassFlags {
  bool hermitian = false;
  bool nonnegative_entries = false;
  bool stoquastic = false;  // Hermitian with real off-diagonals <= 0
  bool column_stochastic = false;
  bool doubly_stochastic = false;
  bool symmetric = false;
  bool permutation = false;
  bool projector = false;
  bool psd = false;
  double tol = kDefaultTol;
};

OperatorMatrix build_matrix(const LocalHamiltonian& h,
                            int max_qubits = kDefaultMaxQubits);

// Realization of a single string (no coefficient).
OperatorMatrix pauli_matrix(const PauliString& p, int num_qubits);

MatrixClassFlags classify(const OperatorMatrix& m, double tol = kDefaultTol);

/// 1 - Pi, where Pi projects onto the eigenspace of `m` with eigenvalues
/// <= tol. Requires Hermitian positive semidefinite input.
OperatorMatrix kernel_projector_complement(const OperatorMatrix& m,
                                           double tol = kDefaultTol);

/// Pauli-basis expansion of a dense 2^m x 2^m matrix. Throws if the matrix
/// is not Hermitian (coefficients must be real).
LocalHamiltonian pauli_decompose(const DenseMatrix& m, int num_qubits);

enum class PauliSet {
  XZ,   // d_i X_i + h_i Z_i + K_ij X_i X_j + J_ij Z_i Z_j
  XYZ,  // every string of weight <= locality
};

LocalHamiltonian random_instance(int num_qubits, int locality,
                                 std::uint64_t seed, double scale = 1.0,
                                 PauliSet set = PauliSet::XZ);

// Computational basis state |index> on num_qubits qubits.
StateVector basis_state(int num_qubits, Index index);
// a (x) b with b on the trailing qubits.
StateVector kron(const StateVector& a, const StateVector& b);

}  // namespace stoqkit
