#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stoqkit/errors.hpp"
#include "stoqkit/sign_elimination.hpp"
#include "stoqkit/spectral.hpp"

using namespace stoqkit;

namespace {

OperatorMatrix single(Pauli p) { return pauli_matrix(PauliString::single(0, p), 1); }

OperatorMatrix half_one_plus_x() {
  return build_matrix(LocalHamiltonian(1, {{0.5, PauliString()}, {0.5, PauliString::single(0, Pauli::X)}}));
}

}  // namespace

TEST(EigDense, Examples) {
  EXPECT_EQ(eig_dense(single(Pauli::Z)).eigenvalues, (std::vector<double>{-1.0, 1.0}));
  const auto p = eig_dense(half_one_plus_x()).eigenvalues;
  EXPECT_NEAR(p[0], 0.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0, 1e-15);

  const LocalHamiltonian minus_z(1, {{-1.0, PauliString::single(0, Pauli::Z)}});
  const auto s = eig_dense(stoquastize(minus_z).realize()).eigenvalues;
  EXPECT_LT(oracle::max_diff(s, {-1, -1, -1, 1}), 1e-14);
}

TEST(EigDense, ResidualsAndCap) {
  const OperatorMatrix m = build_matrix(random_instance(5, 2, 3));
  const Spectrum spec = eig_dense(m);
  EXPECT_LE(spec.max_residual(), 1e-10 * static_cast<double>(m.dim()));
  EXPECT_TRUE(std::is_sorted(spec.eigenvalues.begin(), spec.eigenvalues.end()));
  EXPECT_THROW(eig_dense(m, {16, true}), ResourceError);
}

TEST(EigDense, GeneralPathForNonHermitian) {
  DenseMatrix m(2, 2);
  m << 0, 1, 0, 0;
  const Spectrum s = eig_dense(OperatorMatrix::from_dense(1, m));
  EXPECT_FALSE(s.hermitian);
  EXPECT_EQ(s.complex_eigenvalues.size(), 2u);
}

TEST(EigExtremal, IdentityLowest) {
  const Spectrum s = eig_extremal(OperatorMatrix::identity(3), 1, Which::Lowest);
  EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-12);
}

TEST(EigExtremal, AgreesWithDense) {
  const double tol = 1e-9;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const OperatorMatrix m = build_matrix(random_instance(4 + static_cast<int>(seed), 2, seed, 1.0,
                                                          seed % 2 ? PauliSet::XYZ : PauliSet::XZ));
    if (m.dim() > 512) continue;
    const auto dense = eig_dense(m, {kDefaultDenseCap, false}).eigenvalues;
    const Spectrum lo = eig_extremal(m, 3, Which::Lowest, {tol, seed});
    const Spectrum hi = eig_extremal(m, 3, Which::Highest, {tol, seed});
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(lo.eigenvalues[j], dense[j], 10 * tol);
      EXPECT_NEAR(hi.eigenvalues[j], dense[dense.size() - 3 + j], 10 * tol);
    }
    EXPECT_LE(lo.max_residual(), tol);
  }
}

TEST(EigExtremal, ResolvesDegeneracy) {
  // X (x) X has eigenvalues {-1, -1, 1, 1}.
  const OperatorMatrix xx = pauli_matrix(PauliString({{0, Pauli::X}, {1, Pauli::X}}), 2);
  const Spectrum s = eig_extremal(xx, 2, Which::Lowest);
  EXPECT_NEAR(s.eigenvalues[0], -1.0, 1e-9);
  EXPECT_NEAR(s.eigenvalues[1], -1.0, 1e-9);
}

TEST(EigExtremal, StoquastizedTenQubitsMatchesSector) {
  const LocalHamiltonian h = random_instance(10, 2, 42);
  const MappedHamiltonian m = stoquastize(h);
  const DenseMatrix minus = sector_restriction(m, Sector::Minus);
  const DenseMatrix plus = sector_restriction(m, Sector::Plus);
  const Spectrum restricted = eig_extremal(OperatorMatrix::from_dense(10, minus), 1, Which::Lowest, {1e-9, 1});
  EXPECT_NEAR(restricted.eigenvalues[0], eig_dense_hermitian(minus, false).eigenvalues[0], 1e-7);

  // On the full matrix the lowest state lies in the plus sector, whose
  // entries are the absolute values of the minus sector's.
  const Spectrum full = eig_extremal(m.realize(), 1, Which::Lowest, {1e-9, 1});
  const double plus_ground = eig_dense_hermitian(plus, false).eigenvalues[0];
  EXPECT_NEAR(full.eigenvalues[0], plus_ground, 1e-7);
  EXPECT_LE(plus_ground, eig_dense_hermitian(minus, false).eigenvalues[0] + 1e-12);
}

TEST(SpectralReport, Examples) {
  const SpectralReport a = spectral_report(half_one_plus_x());
  EXPECT_NEAR(a.spectral_gap, 1.0, 1e-12);
  EXPECT_NEAR(a.top_eigenvalue, 1.0, 1e-12);

  const LocalHamiltonian z(1, {{1.0, PauliString::single(0, Pauli::Z)}});
  const SpectralReport b = spectral_report(add_ancilla_penalty(stochastize(z), 0.25).realize());
  EXPECT_NEAR(b.ground_energy, -0.25, 1e-12);
  EXPECT_NEAR(b.top_eigenvalue, 1.0, 1e-12);

  const OperatorMatrix xx = pauli_matrix(PauliString({{0, Pauli::X}, {1, Pauli::X}}), 2);
  const SpectralReport c = spectral_report(xx);
  ASSERT_TRUE(c.second_largest_magnitude.has_value());
  EXPECT_NEAR(*c.second_largest_magnitude, 1.0, 1e-12);
}

TEST(SpectralReport, PerronOnSymmetricStochastic) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const LocalHamiltonian h = random_instance(2 + static_cast<int>(seed % 3), 2, seed);
    const SpectralReport r = spectral_report(stochastize(h).realize());
    ASSERT_TRUE(r.flags.doubly_stochastic);
    ASSERT_TRUE(r.perron_ok.has_value());
    EXPECT_NEAR(r.top_eigenvalue, 1.0, 1e-9);
    EXPECT_GE(*r.uniform_overlap, 1.0 - 1e-9);
    EXPECT_TRUE(*r.perron_ok);
  }
}

TEST(Multiplets, GroupsNearbyValues) {
  const auto g = multiplets({0.0, 1e-10, 1.0, 2.0, 2.0 + 5e-9});
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].size(), 2u);
  EXPECT_EQ(g[2].size(), 2u);
}
