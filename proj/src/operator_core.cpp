#include "stoqkit/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "stoqkit/errors.hpp"
#include "stoqkit/spectral.hpp"

namespace stoqkit {

namespace {

constexpr Complex kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

double max_abs_entry(const SparseMatrix& m) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

void check_register(int num_qubits) {
  if (num_qubits < 0 || num_qubits > 62) {
    throw ContractError("qubit count out of range: " + std::to_string(num_qubits));
  }
}

}  // namespace

char pauli_symbol(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_symbol(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default:
      throw ContractError(std::string("unknown Pauli symbol '") + c + "'");
  }
}

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(std::map<int, Pauli> factors, int sign) : sign_(sign) {
  if (sign != 1 && sign != -1) {
    throw ContractError("PauliString sign must be +1 or -1");
  }
  for (const auto& [q, p] : factors) {
    if (q < 0) throw ContractError("negative qubit index in PauliString");
    if (p != Pauli::I) factors_.emplace(q, p);
  }
}

PauliString PauliString::single(int qubit, Pauli p, int sign) {
  return PauliString({{qubit, p}}, sign);
}

int PauliString::y_count() const {
  return static_cast<int>(std::count_if(factors_.begin(), factors_.end(),
                                        [](const auto& f) { return f.second == Pauli::Y; }));
}

int PauliString::max_qubit() const {
  return factors_.empty() ? -1 : factors_.rbegin()->first;
}

PauliString PauliString::remapped(const std::vector<int>& qubit_map) const {
  std::map<int, Pauli> out;
  for (const auto& [q, p] : factors_) {
    if (q >= static_cast<int>(qubit_map.size())) {
      throw ContractError("qubit map too short for PauliString");
    }
    out.emplace(qubit_map[q], p);
  }
  if (out.size() != factors_.size()) throw ContractError("qubit map is not injective");
  return PauliString(std::move(out), sign_);
}

PauliString::BasisImage PauliString::apply_to_basis(Index col, int num_qubits) const {
  Index row = col;
  int phase = sign_ < 0 ? 2 : 0;
  for (const auto& [q, p] : factors_) {
    const Index mask = qubit_mask(q, num_qubits);
    const bool bit = (col & mask) != 0;
    switch (p) {
      case Pauli::X:
        row ^= mask;
        break;
      case Pauli::Y:
        row ^= mask;
        phase += bit ? 3 : 1;
        break;
      case Pauli::Z:
        phase += bit ? 2 : 0;
        break;
      case Pauli::I:
        break;
    }
  }
  return {row, phase % 4};
}

std::string PauliString::to_string() const {
  std::ostringstream out;
  out << (sign_ < 0 ? "-" : "+");
  if (factors_.empty()) {
    out << "I";
  }
  bool first = true;
  for (const auto& [q, p] : factors_) {
    if (!first) out << " ";
    out << pauli_symbol(p) << q;
    first = false;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// LocalHamiltonian

LocalHamiltonian::LocalHamiltonian(int num_qubits) : num_qubits_(num_qubits) {
  check_register(num_qubits);
}

LocalHamiltonian::LocalHamiltonian(int num_qubits,
                                   const std::vector<std::pair<double, PauliString>>& terms)
    : num_qubits_(num_qubits) {
  check_register(num_qubits);
  std::map<std::map<int, Pauli>, double> merged;
  for (const auto& [coeff, string] : terms) {
    if (!std::isfinite(coeff)) throw ContractError("non-finite Hamiltonian coefficient");
    if (string.max_qubit() >= num_qubits) {
      throw ContractError("Pauli string " + string.to_string() + " exceeds register of " +
                          std::to_string(num_qubits) + " qubits");
    }
    merged[string.factors()] += coeff * string.sign();
  }
  for (const auto& [factors, coeff] : merged) {
    if (std::abs(coeff) <= kCoefficientCutoff) continue;
    terms_.push_back({std::abs(coeff), PauliString(factors, coeff < 0 ? -1 : 1)});
  }
}

int LocalHamiltonian::locality() const {
  int k = 0;
  for (const auto& t : terms_) k = std::max(k, t.string.weight());
  return k;
}

double LocalHamiltonian::norm_sum() const {
  double n = 0;
  for (const auto& t : terms_) n += t.alpha;
  return n;
}

bool LocalHamiltonian::is_real() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const HamiltonianTerm& t) { return t.string.is_real(); });
}

double LocalHamiltonian::coefficient(const std::map<int, Pauli>& factors) const {
  const PauliString key(factors);
  for (const auto& t : terms_) {
    if (t.string.factors() == key.factors()) return t.alpha * t.string.sign();
  }
  return 0.0;
}

std::vector<std::pair<double, PauliString>> LocalHamiltonian::signed_terms() const {
  std::vector<std::pair<double, PauliString>> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.emplace_back(t.alpha, t.string);
  return out;
}

LocalHamiltonian LocalHamiltonian::operator+(const LocalHamiltonian& other) const {
  if (other.num_qubits_ != num_qubits_) {
    throw ContractError("cannot add Hamiltonians on different registers");
  }
  auto all = signed_terms();
  auto rhs = other.signed_terms();
  all.insert(all.end(), rhs.begin(), rhs.end());
  return LocalHamiltonian(num_qubits_, all);
}

LocalHamiltonian LocalHamiltonian::scaled(double factor) const {
  auto all = signed_terms();
  for (auto& [c, s] : all) c *= factor;
  return LocalHamiltonian(num_qubits_, all);
}

LocalHamiltonian LocalHamiltonian::embedded(int num_qubits,
                                            const std::vector<int>& qubit_map) const {
  std::vector<std::pair<double, PauliString>> all;
  for (const auto& t : terms_) all.emplace_back(t.alpha, t.string.remapped(qubit_map));
  return LocalHamiltonian(num_qubits, all);
}

// ---------------------------------------------------------------------------
// OperatorMatrix

OperatorMatrix::OperatorMatrix(int num_qubits)
    : num_qubits_(num_qubits), matrix_(Eigen::Index(1) << num_qubits, Eigen::Index(1) << num_qubits) {
  check_register(num_qubits);
}

OperatorMatrix::OperatorMatrix(int num_qubits, SparseMatrix matrix)
    : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
  check_register(num_qubits);
  const auto d = static_cast<Eigen::Index>(dim());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw ContractError("operator dimension does not match 2^" + std::to_string(num_qubits));
  }
  matrix_.prune([](Eigen::Index, Eigen::Index, const Complex& v) {
    return std::abs(v) > kCoefficientCutoff;
  });
  matrix_.makeCompressed();
  hermitian_ = max_abs_entry(SparseMatrix(SparseMatrix(matrix_.adjoint()) - matrix_)) <=
               1e-12 * std::max(1.0, max_abs());
}

OperatorMatrix OperatorMatrix::identity(int num_qubits) {
  const auto d = Eigen::Index(1) << num_qubits;
  SparseMatrix m(d, d);
  m.setIdentity();
  return OperatorMatrix(num_qubits, std::move(m));
}

OperatorMatrix OperatorMatrix::from_dense(int num_qubits, const DenseMatrix& dense) {
  return OperatorMatrix(num_qubits, dense.sparseView(1.0, kCoefficientCutoff));
}

OperatorMatrix OperatorMatrix::from_triplets(int num_qubits,
                                             const std::vector<Eigen::Triplet<Complex>>& triplets) {
  const auto d = Eigen::Index(1) << num_qubits;
  SparseMatrix m(d, d);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return OperatorMatrix(num_qubits, std::move(m));
}

bool OperatorMatrix::is_real(double tol) const {
  for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) {
      if (std::abs(it.value().imag()) > tol) return false;
    }
  }
  return true;
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& other) const {
  if (other.num_qubits_ != num_qubits_) throw ContractError("operator size mismatch in +");
  return OperatorMatrix(num_qubits_, matrix_ + other.matrix_);
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& other) const {
  if (other.num_qubits_ != num_qubits_) throw ContractError("operator size mismatch in -");
  return OperatorMatrix(num_qubits_, matrix_ - other.matrix_);
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& other) const {
  if (other.num_qubits_ != num_qubits_) throw ContractError("operator size mismatch in *");
  return OperatorMatrix(num_qubits_, SparseMatrix(matrix_ * other.matrix_));
}

OperatorMatrix OperatorMatrix::scaled(Complex factor) const {
  return OperatorMatrix(num_qubits_, SparseMatrix(matrix_ * factor));
}

OperatorMatrix OperatorMatrix::adjoint() const {
  return OperatorMatrix(num_qubits_, SparseMatrix(matrix_.adjoint()));
}

OperatorMatrix OperatorMatrix::conjugate() const {
  return OperatorMatrix(num_qubits_, SparseMatrix(matrix_.conjugate()));
}

OperatorMatrix OperatorMatrix::kron(const OperatorMatrix& other) const {
  SparseMatrix k = Eigen::kroneckerProduct(matrix_, other.matrix_);
  return OperatorMatrix(num_qubits_ + other.num_qubits_, std::move(k));
}

double OperatorMatrix::max_abs_diff(const OperatorMatrix& other) const {
  if (other.num_qubits_ != num_qubits_) throw ContractError("operator size mismatch");
  return max_abs_entry(SparseMatrix(matrix_ - other.matrix_));
}

double OperatorMatrix::max_abs() const { return max_abs_entry(matrix_); }

OperatorMatrix operator*(Complex factor, const OperatorMatrix& m) { return m.scaled(factor); }

// ---------------------------------------------------------------------------
// LocalOperator

OperatorMatrix LocalOperator::embed(int num_qubits) const {
  const int k = arity();
  if (matrix.rows() != (Eigen::Index(1) << k) || matrix.cols() != matrix.rows()) {
    throw ContractError("local operator '" + label + "' has wrong matrix size");
  }
  std::vector<Index> masks(k);
  Index support = 0;
  for (int j = 0; j < k; ++j) {
    if (qubits[j] < 0 || qubits[j] >= num_qubits) {
      throw ContractError("local operator '" + label + "' references qubit outside register");
    }
    masks[j] = qubit_mask(qubits[j], num_qubits);
    if (support & masks[j]) throw ContractError("local operator '" + label + "' repeats a qubit");
    support |= masks[j];
  }
  auto scatter = [&](Index local) {
    Index out = 0;
    for (int j = 0; j < k; ++j) {
      if (local & (Index{1} << (k - 1 - j))) out |= masks[j];
    }
    return out;
  };
  std::vector<Index> scattered(Index{1} << k);
  for (Index l = 0; l < scattered.size(); ++l) scattered[l] = scatter(l);

  std::vector<Eigen::Triplet<Complex>> triplets;
  const Index d = Index{1} << num_qubits;
  for (Index col = 0; col < d; ++col) {
    Index local_col = 0;
    for (int j = 0; j < k; ++j) {
      if (col & masks[j]) local_col |= Index{1} << (k - 1 - j);
    }
    const Index rest = col & ~support;
    for (Index local_row = 0; local_row < scattered.size(); ++local_row) {
      const Complex v = matrix(static_cast<Eigen::Index>(local_row), static_cast<Eigen::Index>(local_col));
      if (std::abs(v) <= kCoefficientCutoff) continue;
      triplets.emplace_back(static_cast<Eigen::Index>(rest | scattered[local_row]),
                            static_cast<Eigen::Index>(col), v);
    }
  }
  return OperatorMatrix::from_triplets(num_qubits, triplets);
}

LocalHamiltonian LocalOperator::to_hamiltonian(int num_qubits) const {
  return pauli_decompose(matrix, arity()).embedded(num_qubits, qubits);
}

// ---------------------------------------------------------------------------
// Free functions

OperatorMatrix pauli_matrix(const PauliString& p, int num_qubits) {
  if (p.max_qubit() >= num_qubits) throw ContractError("Pauli string exceeds register");
  std::vector<Eigen::Triplet<Complex>> triplets;
  const Index d = Index{1} << num_qubits;
  triplets.reserve(d);
  for (Index col = 0; col < d; ++col) {
    const auto image = p.apply_to_basis(col, num_qubits);
    triplets.emplace_back(static_cast<Eigen::Index>(image.row), static_cast<Eigen::Index>(col),
                          kPhases[image.phase]);
  }
  return OperatorMatrix::from_triplets(num_qubits, triplets);
}

OperatorMatrix build_matrix(const LocalHamiltonian& h, int max_qubits) {
  const int n = h.num_qubits();
  if (n > max_qubits) {
    throw ResourceError("Hamiltonian on " + std::to_string(n) +
                        " qubits exceeds configured maximum of " + std::to_string(max_qubits));
  }
  const Index d = Index{1} << n;
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(d * h.terms().size());
  for (const auto& term : h.terms()) {
    for (Index col = 0; col < d; ++col) {
      const auto image = term.string.apply_to_basis(col, n);
      triplets.emplace_back(static_cast<Eigen::Index>(image.row), static_cast<Eigen::Index>(col),
                            term.alpha * kPhases[image.phase]);
    }
  }
  return OperatorMatrix::from_triplets(n, triplets);
}

MatrixClassFlags classify(const OperatorMatrix& m, double tol) {
  MatrixClassFlags f;
  f.tol = tol;
  const SparseMatrix& a = m.sparse();
  const auto d = static_cast<Eigen::Index>(m.dim());

  f.hermitian = max_abs_entry(SparseMatrix(SparseMatrix(a.adjoint()) - a)) <= tol;
  f.symmetric = max_abs_entry(SparseMatrix(SparseMatrix(a.transpose()) - a)) <= tol;

  bool nonnegative = true;
  bool offdiag_nonpositive = true;
  bool zero_one = true;
  std::vector<Complex> col_sums(d, 0.0), row_sums(d, 0.0);
  std::vector<int> col_ones(d, 0), row_ones(d, 0);
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const Complex v = it.value();
      col_sums[it.col()] += v;
      row_sums[it.row()] += v;
      if (std::abs(v.imag()) > tol || v.real() < -tol) nonnegative = false;
      if (it.row() != it.col() && (std::abs(v.imag()) > tol || v.real() > tol)) {
        offdiag_nonpositive = false;
      }
      if (std::abs(v - 1.0) <= tol) {
        ++col_ones[it.col()];
        ++row_ones[it.row()];
      } else if (std::abs(v) > tol) {
        zero_one = false;
      }
    }
  }
  f.nonnegative_entries = nonnegative;
  f.stoquastic = f.hermitian && offdiag_nonpositive;
  auto sums_to_one = [&](const std::vector<Complex>& sums) {
    return std::all_of(sums.begin(), sums.end(), [&](Complex s) { return std::abs(s - 1.0) <= tol; });
  };
  f.column_stochastic = nonnegative && sums_to_one(col_sums);
  f.doubly_stochastic = f.column_stochastic && sums_to_one(row_sums);
  auto exactly_one = [](const std::vector<int>& c) {
    return std::all_of(c.begin(), c.end(), [](int x) { return x == 1; });
  };
  f.permutation = f.doubly_stochastic && zero_one && exactly_one(col_ones) && exactly_one(row_ones);

  if (f.hermitian) {
    const SparseMatrix sq = a * a;
    const SparseMatrix diff = sq - a;
    f.projector = diff.nonZeros() == 0 || diff.norm() <= tol;
    if (f.projector) {
      // ||M^2 - M||_F <= tol bounds every eigenvalue below by -tol.
      f.psd = true;
    } else {
      f.psd = min_eigenvalue(m) >= -tol;
    }
  }
  return f;
}

OperatorMatrix kernel_projector_complement(const OperatorMatrix& m, double tol) {
  if (!m.is_hermitian()) throw ContractError("kernel_projector_complement requires a Hermitian matrix");
  const Spectrum spec = eig_dense(m);
  if (!spec.eigenvalues.empty() && spec.eigenvalues.front() < -tol) {
    throw ContractError("kernel_projector_complement requires a positive semidefinite matrix (min eigenvalue " +
                        std::to_string(spec.eigenvalues.front()) + ")");
  }
  const auto d = static_cast<Eigen::Index>(m.dim());
  DenseMatrix pi = DenseMatrix::Zero(d, d);
  const DenseMatrix& vecs = *spec.eigenvectors;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (spec.eigenvalues[j] <= tol) pi += vecs.col(j) * vecs.col(j).adjoint();
  }
  return OperatorMatrix::from_dense(m.num_qubits(), DenseMatrix::Identity(d, d) - pi);
}

LocalHamiltonian pauli_decompose(const DenseMatrix& m, int num_qubits) {
  const Index d = Index{1} << num_qubits;
  if (static_cast<Index>(m.rows()) != d || static_cast<Index>(m.cols()) != d) {
    throw ContractError("pauli_decompose: matrix is not 2^n x 2^n");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  std::vector<std::pair<double, PauliString>> terms;
  const Index count = Index{1} << (2 * num_qubits);
  for (Index code = 0; code < count; ++code) {
    std::map<int, Pauli> factors;
    for (int q = 0; q < num_qubits; ++q) {
      const auto p = static_cast<Pauli>((code >> (2 * q)) & 3U);
      if (p != Pauli::I) factors.emplace(q, p);
    }
    const PauliString string(factors);
    Complex trace = 0.0;
    for (Index col = 0; col < d; ++col) {
      const auto image = string.apply_to_basis(col, num_qubits);
      trace += kPhases[image.phase] * m(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(image.row));
    }
    const Complex c = trace / static_cast<double>(d);
    if (std::abs(c.imag()) > 1e-10 * scale) {
      throw ContractError("pauli_decompose: matrix is not Hermitian");
    }
    if (std::abs(c.real()) > kCoefficientCutoff * scale) terms.emplace_back(c.real(), string);
  }
  return LocalHamiltonian(num_qubits, terms);
}

LocalHamiltonian random_instance(int num_qubits, int locality, std::uint64_t seed, double scale,
                                 PauliSet set) {
  if (num_qubits < 1) throw ContractError("random_instance requires at least one qubit");
  if (locality < 1) throw ContractError("random_instance locality must be >= 1");
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw ContractError("random_instance scale must be finite and >= 0");
  if (set == PauliSet::XZ && locality > 2) throw ContractError("XZ-form instances are at most 2-local");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<std::pair<double, PauliString>> terms;
  auto add = [&](std::map<int, Pauli> factors) {
    const double c = scale * coeff(rng);
    terms.emplace_back(c, PauliString(std::move(factors)));
  };

  if (set == PauliSet::XZ) {
    for (int i = 0; i < num_qubits; ++i) {
      add({{i, Pauli::X}});
      add({{i, Pauli::Z}});
    }
    if (locality >= 2) {
      for (int i = 0; i < num_qubits; ++i) {
        for (int j = i + 1; j < num_qubits; ++j) {
          add({{i, Pauli::X}, {j, Pauli::X}});
          add({{i, Pauli::Z}, {j, Pauli::Z}});
        }
      }
    }
  } else {
    const int k_max = std::min(locality, num_qubits);
    for (int k = 1; k <= k_max; ++k) {
      std::vector<int> subset(k);
      std::vector<bool> choose(num_qubits, false);
      std::fill(choose.begin(), choose.begin() + k, true);
      do {
        int idx = 0;
        for (int q = 0; q < num_qubits; ++q) {
          if (choose[q]) subset[idx++] = q;
        }
        int combos = 1;
        for (int j = 0; j < k; ++j) combos *= 3;
        for (int code = 0; code < combos; ++code) {
          std::map<int, Pauli> factors;
          int rest = code;
          for (int j = 0; j < k; ++j) {
            factors.emplace(subset[j], static_cast<Pauli>(1 + rest % 3));
            rest /= 3;
          }
          add(std::move(factors));
        }
      } while (std::prev_permutation(choose.begin(), choose.end()));
    }
  }
  return LocalHamiltonian(num_qubits, terms);
}

StateVector basis_state(int num_qubits, Index index) {
  StateVector v = StateVector::Zero(Eigen::Index(1) << num_qubits);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

StateVector kron(const StateVector& a, const StateVector& b) {
  StateVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace stoqkit
