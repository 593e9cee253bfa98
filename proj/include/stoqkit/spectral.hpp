#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stoqkit/operator_core.hpp"

namespace stoqkit {

inline constexpr Index kDefaultDenseCap = 4096;
// Eigenvalues closer than this are reported as one multiplet.
inline constexpr double kDegeneracyThreshold = 1e-8;

enum class SolverMethod { Dense, Iterative };

struct Spectrum {
  // Ascending. On the general (non-Hermitian) path these are the real parts,
  // ordered by (real, imag), and complex_eigenvalues carries the full values.
  std::vector<double> eigenvalues;
  std::vector<Complex> complex_eigenvalues;
  // Column j belongs to eigenvalues[j].
  std::optional<DenseMatrix> eigenvectors;
  std::vector<double> residual_norms;
  SolverMethod method = SolverMethod::Dense;
  bool hermitian = true;

  std::size_t size() const { return eigenvalues.size(); }
  double max_residual() const;
};

struct DenseOptions {
  Index dense_cap = kDefaultDenseCap;
  bool eigenvectors = true;
};

Spectrum eig_dense(const OperatorMatrix& m, const DenseOptions& options = {});
// Hermitian dense input of arbitrary (not necessarily 2^m) size.
Spectrum eig_dense_hermitian(const DenseMatrix& m, bool eigenvectors = true);

enum class Which { Lowest, Highest, LargestMagnitude };

struct ExtremalOptions {
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int max_krylov = 300;
  int max_restarts = 50;
};

/// k extremal eigenpairs of a Hermitian matrix by Lanczos with full
/// reorthogonalization. Degenerate eigenvalues are resolved by deflating
/// each converged vector before the next solve.
Spectrum eig_extremal(const OperatorMatrix& m, int k, Which which,
                      const ExtremalOptions& options = {});

double min_eigenvalue(const OperatorMatrix& m, Index dense_cap = kDefaultDenseCap);

// Index groups of an ascending list whose neighbours differ by <= threshold.
std::vector<std::vector<std::size_t>> multiplets(const std::vector<double>& ascending,
                                                 double threshold = kDegeneracyThreshold);

struct ReportOptions {
  double tol = kDefaultTol;
  double perron_tol = 1e-9;
  Index dense_cap = kDefaultDenseCap;
  std::uint64_t seed = 0;
};

struct SpectralReport {
  Index dim = 0;
  SolverMethod method = SolverMethod::Dense;
  double ground_energy = 0.0;
  double spectral_gap = 0.0;  // lambda_1 - lambda_0, counting multiplicity
  int ground_degeneracy = 1;
  double top_eigenvalue = 0.0;
  // Stochastic inputs only: |lambda| of the second entry when sorted by
  // decreasing magnitude.
  std::optional<double> second_largest_magnitude;
  // Symmetric stochastic inputs only.
  std::optional<bool> perron_ok;
  std::optional<double> uniform_overlap;
  MatrixClassFlags flags;
};

SpectralReport spectral_report(const OperatorMatrix& m, const ReportOptions& options = {});

}  // namespace stoqkit
