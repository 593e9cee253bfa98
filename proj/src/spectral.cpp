#include "stoqkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "stoqkit/errors.hpp"

namespace stoqkit {

namespace {

std::vector<double> column_residuals(const SparseMatrix& a, const DenseMatrix& vecs,
                                     const std::vector<Complex>& values) {
  std::vector<double> res(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    res[j] = (a * vecs.col(col) - values[j] * vecs.col(col)).norm();
  }
  return res;
}

double gershgorin_bound(const SparseMatrix& a) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) rows(it.row()) += std::abs(it.value());
  }
  return rows.size() ? std::max(rows.maxCoeff(), 1e-300) : 1.0;
}

struct RitzPair {
  double value;
  StateVector vector;
  double residual;
};

void project_out(StateVector& v, const std::vector<StateVector>& basis) {
  for (const auto& q : basis) v -= q * q.dot(v);
}

RitzPair lanczos_extreme(const SparseMatrix& a, bool lowest, const std::vector<StateVector>& locked,
                         const ExtremalOptions& options, std::mt19937_64& rng) {
  const Eigen::Index d = a.rows();
  const double scale = gershgorin_bound(a);
  std::normal_distribution<double> normal;
  StateVector start(d);
  for (Eigen::Index i = 0; i < d; ++i) start(i) = Complex(normal(rng), normal(rng));
  project_out(start, locked);
  project_out(start, locked);
  start.normalize();

  const int krylov = static_cast<int>(
      std::min<Eigen::Index>(options.max_krylov, d - static_cast<Eigen::Index>(locked.size())));
  RitzPair best{0.0, start, std::numeric_limits<double>::infinity()};

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    std::vector<StateVector> basis{start};
    std::vector<double> alpha, beta;
    for (int j = 0; j < krylov; ++j) {
      StateVector w = a * basis[j];
      alpha.push_back(basis[j].dot(w).real());
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : basis) w -= v * v.dot(w);
        project_out(w, locked);
      }
      const double b = w.norm();
      beta.push_back(b);
      const bool exhausted = b <= 1e-13 * scale || j + 1 == krylov;
      if (exhausted || (j + 1) % 4 == 0) {
        const int m = j + 1;
        Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
        Eigen::VectorXd sub(std::max(m - 1, 0));
        for (int i = 0; i + 1 < m; ++i) sub(i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        const int idx = lowest ? 0 : m - 1;
        const Eigen::VectorXd y = tri.eigenvectors().col(idx);
        const double estimate = b * std::abs(y(m - 1));
        if (estimate <= 0.5 * options.tol || exhausted) {
          StateVector x = StateVector::Zero(d);
          for (int i = 0; i < m; ++i) x += y(i) * basis[i];
          project_out(x, locked);
          x.normalize();
          const StateVector ax = a * x;
          const double theta = x.dot(ax).real();
          const double residual = (ax - theta * x).norm();
          if (residual < best.residual) best = {theta, x, residual};
          if (residual <= options.tol) return best;
          if (exhausted) break;
        }
      }
      basis.push_back(w / b);
    }
    start = best.vector;
  }
  throw ConvergenceError("Lanczos did not converge to tolerance " + std::to_string(options.tol) +
                             " (best residual " + std::to_string(best.residual) + ")",
                         best.residual);
}

Spectrum lanczos_side(const SparseMatrix& a, int k, bool lowest, const ExtremalOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<StateVector> locked;
  std::vector<RitzPair> found;
  for (int i = 0; i < k; ++i) {
    RitzPair pair = lanczos_extreme(a, lowest, locked, options, rng);
    locked.push_back(pair.vector);
    found.push_back(std::move(pair));
  }
  std::sort(found.begin(), found.end(),
            [](const RitzPair& l, const RitzPair& r) { return l.value < r.value; });
  Spectrum s;
  s.method = SolverMethod::Iterative;
  DenseMatrix vecs(a.rows(), k);
  for (int i = 0; i < k; ++i) {
    s.eigenvalues.push_back(found[i].value);
    s.residual_norms.push_back(found[i].residual);
    vecs.col(i) = found[i].vector;
  }
  s.eigenvectors = std::move(vecs);
  return s;
}

}  // namespace

double Spectrum::max_residual() const {
  double worst = 0.0;
  for (double r : residual_norms) worst = std::max(worst, r);
  return worst;
}

Spectrum eig_dense_hermitian(const DenseMatrix& m, bool eigenvectors) {
  Spectrum s;
  s.method = SolverMethod::Dense;
  const auto opts = eigenvectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  const bool real = m.imag().cwiseAbs().maxCoeff() == 0.0;
  Eigen::VectorXd values;
  if (real) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.real(), opts);
    values = solver.eigenvalues();
    if (eigenvectors) s.eigenvectors = solver.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m, opts);
    values = solver.eigenvalues();
    if (eigenvectors) s.eigenvectors = solver.eigenvectors();
  }
  s.eigenvalues.assign(values.data(), values.data() + values.size());
  if (eigenvectors) {
    std::vector<Complex> cv(s.eigenvalues.begin(), s.eigenvalues.end());
    const SparseMatrix sp = m.sparseView(1.0, 0.0);
    s.residual_norms = column_residuals(sp, *s.eigenvectors, cv);
  }
  return s;
}

Spectrum eig_dense(const OperatorMatrix& m, const DenseOptions& options) {
  if (m.dim() > options.dense_cap) {
    throw ResourceError("dimension " + std::to_string(m.dim()) + " exceeds dense cap " +
                        std::to_string(options.dense_cap) + "; use eig_extremal");
  }
  const DenseMatrix dense = m.dense();
  if (m.is_hermitian()) {
    // Symmetrize away roundoff so the solver sees an exactly Hermitian input.
    const DenseMatrix h = 0.5 * (dense + dense.adjoint());
    Spectrum s = eig_dense_hermitian(h, options.eigenvectors);
    if (options.eigenvectors) {
      std::vector<Complex> cv(s.eigenvalues.begin(), s.eigenvalues.end());
      s.residual_norms = column_residuals(m.sparse(), *s.eigenvectors, cv);
    }
    return s;
  }

  Eigen::ComplexEigenSolver<DenseMatrix> solver(dense, options.eigenvectors);
  const Eigen::VectorXcd values = solver.eigenvalues();
  std::vector<Eigen::Index> order(values.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    if (values(l).real() != values(r).real()) return values(l).real() < values(r).real();
    return values(l).imag() < values(r).imag();
  });
  Spectrum s;
  s.method = SolverMethod::Dense;
  s.hermitian = false;
  DenseMatrix vecs;
  if (options.eigenvectors) vecs.resize(dense.rows(), dense.cols());
  for (std::size_t j = 0; j < order.size(); ++j) {
    s.complex_eigenvalues.push_back(values(order[j]));
    s.eigenvalues.push_back(values(order[j]).real());
    if (options.eigenvectors) vecs.col(j) = solver.eigenvectors().col(order[j]);
  }
  if (options.eigenvectors) {
    s.residual_norms = column_residuals(m.sparse(), vecs, s.complex_eigenvalues);
    s.eigenvectors = std::move(vecs);
  }
  return s;
}

Spectrum eig_extremal(const OperatorMatrix& m, int k, Which which, const ExtremalOptions& options) {
  if (k < 1) throw ContractError("eig_extremal requires k >= 1");
  if (static_cast<Index>(k) > m.dim()) throw ContractError("eig_extremal: k exceeds dimension");
  if (!m.is_hermitian()) throw ContractError("eig_extremal requires a Hermitian matrix");
  const SparseMatrix& a = m.sparse();
  switch (which) {
    case Which::Lowest:
      return lanczos_side(a, k, true, options);
    case Which::Highest:
      return lanczos_side(a, k, false, options);
    case Which::LargestMagnitude:
      break;
  }
  if (2 * static_cast<Index>(k) > m.dim()) {
    // Both ends would overlap; the full problem is no larger than 2k.
    Spectrum full = eig_dense(m);
    std::vector<std::size_t> order(full.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
      return std::abs(full.eigenvalues[l]) > std::abs(full.eigenvalues[r]);
    });
    order.resize(k);
    std::sort(order.begin(), order.end());
    Spectrum s;
    s.method = SolverMethod::Iterative;
    DenseMatrix vecs(a.rows(), k);
    for (int i = 0; i < k; ++i) {
      s.eigenvalues.push_back(full.eigenvalues[order[i]]);
      s.residual_norms.push_back(full.residual_norms[order[i]]);
      vecs.col(i) = full.eigenvectors->col(static_cast<Eigen::Index>(order[i]));
    }
    s.eigenvectors = std::move(vecs);
    return s;
  }
  const Spectrum low = lanczos_side(a, k, true, options);
  const Spectrum high = lanczos_side(a, k, false, options);
  struct Candidate {
    double value;
    double residual;
    StateVector vector;
  };
  std::vector<Candidate> all;
  for (const Spectrum* side : {&low, &high}) {
    for (std::size_t i = 0; i < side->size(); ++i) {
      all.push_back({side->eigenvalues[i], side->residual_norms[i],
                     side->eigenvectors->col(static_cast<Eigen::Index>(i))});
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const Candidate& l, const Candidate& r) {
    return std::abs(l.value) > std::abs(r.value);
  });
  all.resize(k);
  std::sort(all.begin(), all.end(), [](const Candidate& l, const Candidate& r) { return l.value < r.value; });
  Spectrum s;
  s.method = SolverMethod::Iterative;
  DenseMatrix vecs(a.rows(), k);
  for (int i = 0; i < k; ++i) {
    s.eigenvalues.push_back(all[i].value);
    s.residual_norms.push_back(all[i].residual);
    vecs.col(i) = all[i].vector;
  }
  s.eigenvectors = std::move(vecs);
  return s;
}

double min_eigenvalue(const OperatorMatrix& m, Index dense_cap) {
  if (!m.is_hermitian()) throw ContractError("min_eigenvalue requires a Hermitian matrix");
  if (m.dim() <= dense_cap) {
    return eig_dense(m, {dense_cap, false}).eigenvalues.front();
  }
  return eig_extremal(m, 1, Which::Lowest).eigenvalues.front();
}

std::vector<std::vector<std::size_t>> multiplets(const std::vector<double>& ascending, double threshold) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    if (groups.empty() || ascending[i] - ascending[groups.back().back()] > threshold) {
      groups.push_back({i});
    } else {
      groups.back().push_back(i);
    }
  }
  return groups;
}

SpectralReport spectral_report(const OperatorMatrix& m, const ReportOptions& options) {
  SpectralReport r;
  r.dim = m.dim();
  r.flags = classify(m, options.tol);

  std::vector<double> values;  // ascending (real parts if non-Hermitian)
  std::vector<double> magnitudes;
  std::optional<DenseMatrix> top_vectors;
  std::vector<std::size_t> top_group;

  if (m.dim() <= options.dense_cap) {
    const Spectrum s = eig_dense(m, {options.dense_cap, true});
    r.method = SolverMethod::Dense;
    values = s.eigenvalues;
    if (s.hermitian) {
      for (double v : values) magnitudes.push_back(std::abs(v));
    } else {
      for (const Complex& v : s.complex_eigenvalues) magnitudes.push_back(std::abs(v));
    }
    const auto groups = multiplets(values);
    top_group = groups.back();
    DenseMatrix tv(m.dim(), top_group.size());
    for (std::size_t i = 0; i < top_group.size(); ++i) {
      tv.col(static_cast<Eigen::Index>(i)) = s.eigenvectors->col(static_cast<Eigen::Index>(top_group[i]));
    }
    top_vectors = std::move(tv);
  } else {
    if (!m.is_hermitian()) {
      throw ResourceError("non-Hermitian matrix of dimension " + std::to_string(m.dim()) +
                          " exceeds dense cap");
    }
    ExtremalOptions eo;
    eo.seed = options.seed;
    const Spectrum low = eig_extremal(m, 2, Which::Lowest, eo);
    const Spectrum high = eig_extremal(m, 2, Which::Highest, eo);
    const Spectrum mag = eig_extremal(m, 2, Which::LargestMagnitude, eo);
    r.method = SolverMethod::Iterative;
    values = {low.eigenvalues[0], low.eigenvalues[1], high.eigenvalues[0], high.eigenvalues[1]};
    for (double v : mag.eigenvalues) magnitudes.push_back(std::abs(v));
    if (high.eigenvalues[1] - high.eigenvalues[0] <= kDegeneracyThreshold) {
      top_vectors = *high.eigenvectors;
    } else {
      top_vectors = high.eigenvectors->col(1);
    }
  }

  r.ground_energy = values.front();
  r.top_eigenvalue = values.back();
  r.spectral_gap = values.size() > 1 ? values[1] - values[0] : 0.0;
  r.ground_degeneracy = static_cast<int>(multiplets(values).front().size());

  if (r.flags.column_stochastic) {
    std::sort(magnitudes.begin(), magnitudes.end(), std::greater<>());
    r.second_largest_magnitude = magnitudes.size() > 1 ? magnitudes[1] : magnitudes[0];
  }
  if (r.flags.doubly_stochastic && r.flags.symmetric && top_vectors) {
    const StateVector uniform =
        StateVector::Constant(static_cast<Eigen::Index>(m.dim()), 1.0 / std::sqrt(static_cast<double>(m.dim())));
    const Eigen::VectorXcd overlaps = top_vectors->adjoint() * uniform;
    r.uniform_overlap = overlaps.squaredNorm();
    r.perron_ok = std::abs(r.top_eigenvalue - 1.0) <= options.perron_tol &&
                  *r.uniform_overlap >= 1.0 - options.perron_tol;
  }
  return r;
}

}  // namespace stoqkit
