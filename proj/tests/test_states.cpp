#include <gtest/gtest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "luinv/states.hpp"
#include "oracle.hpp"

using namespace luinv;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

Matrix kron_all(const std::vector<Matrix>& us) {
    Matrix out = Matrix::Identity(1, 1);
    for (const auto& u : us) out = Matrix(Eigen::kroneckerProduct(out, u));
    return out;
}

}  // namespace

TEST(Dims, BasicsAndGuard) {
    const Dims d{2, 3, 4};
    EXPECT_EQ(d.parties(), 3);
    EXPECT_EQ(d.total(), 24u);
    EXPECT_EQ(d.strides(), (std::vector<std::size_t>{12, 4, 1}));
    EXPECT_EQ(d.select({1, 3}).list(), (std::vector<int>{2, 4}));
    EXPECT_THROW(Dims({2, 0}), std::invalid_argument);
    EXPECT_THROW(Dims({64, 65}), resource_error);
    const auto saved = max_total_dimension.load();
    max_total_dimension = 8;
    EXPECT_THROW(Dims({3, 3}), resource_error);
    max_total_dimension = saved;
}

TEST(SubsystemSet, Validation) {
    EXPECT_THROW(SubsystemSet({2, 1}), std::invalid_argument);
    EXPECT_THROW(SubsystemSet({0}), std::out_of_range);
    EXPECT_EQ(SubsystemSet::of({3, 1, 3}).list(), (std::vector<int>{1, 3}));
    EXPECT_EQ(SubsystemSet({2}).complement(3).list(), (std::vector<int>{1, 3}));
    EXPECT_THROW(SubsystemSet({4}).complement(3), std::out_of_range);
}

TEST(PartialTrace, MatchesOracleOnAllSubsets) {
    const Dims dims{2, 3, 2};
    const auto rho = random_density(dims, 11, 5);
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<int> traced;
        std::vector<bool> flags(3);
        for (int j = 0; j < 3; ++j)
            if (mask >> j & 1) {
                traced.push_back(j + 1);
                flags[static_cast<std::size_t>(j)] = true;
            }
        const auto got = partial_trace(rho, SubsystemSet(traced));
        const auto want = oracle::partial_trace(rho.entries, dims.list(), flags);
        EXPECT_LT(max_diff(got.entries, want), 1e-12) << "mask " << mask;
    }
}

TEST(PartialTrace, EmptyAndFull) {
    const Dims dims{2, 2};
    const auto rho = random_density(dims, 3, 2);
    EXPECT_LT(max_diff(partial_trace(rho, SubsystemSet{}).entries, rho.entries), 1e-15);
    const auto scalar = partial_trace(rho, SubsystemSet{1, 2});
    EXPECT_EQ(scalar.entries.rows(), 1);
    EXPECT_NEAR(std::abs(scalar.entries(0, 0) - rho.trace()), 0.0, 1e-12);
}

TEST(PartialTranspose, InvolutionAndTrace) {
    const Dims dims{2, 3};
    const auto rho = random_density(dims, 5, 6);
    const auto t = partial_transpose(rho, SubsystemSet{1});
    EXPECT_LT(max_diff(partial_transpose(t, SubsystemSet{1}).entries, rho.entries), 1e-15);
    EXPECT_NEAR(std::abs(t.trace() - rho.trace()), 0.0, 1e-12);
    const auto full = partial_transpose(rho, SubsystemSet{1, 2});
    EXPECT_LT(max_diff(full.entries, rho.entries.transpose()), 1e-15);
    // element check: ⟨i1 i2| ρ^{T1} |j1 j2⟩ = ⟨j1 i2| ρ |i1 j2⟩
    EXPECT_EQ(t.entries(0 * 3 + 2, 1 * 3 + 1), rho.entries(1 * 3 + 2, 0 * 3 + 1));
}

TEST(TensorProduct, KroneckerAndReordering) {
    const auto a = random_density(Dims{2}, 1, 2);
    const auto b = random_density(Dims{3}, 2, 3);
    const auto ab = tensor_product(a, {1}, b, {2});
    EXPECT_LT(max_diff(ab.entries, Eigen::kroneckerProduct(a.entries, b.entries)), 1e-14);
    const auto ba = tensor_product(a, {2}, b, {1});
    EXPECT_LT(max_diff(ba.entries, Eigen::kroneckerProduct(b.entries, a.entries)), 1e-14);
    const auto id = tensor_with_identity(a, SubsystemSet{2}, Dims{2, 3});
    EXPECT_LT(max_diff(id.entries, Eigen::kroneckerProduct(a.entries, Matrix::Identity(3, 3))), 1e-14);
    EXPECT_THROW(tensor_with_identity(a, SubsystemSet{1}, Dims{2, 3}), std::invalid_argument);
}

TEST(Sampling, Reproducible) {
    const Dims dims{2, 3};
    EXPECT_EQ(random_pure(dims, 42).amplitudes, random_pure(dims, 42).amplitudes);
    EXPECT_NE(random_pure(dims, 42).amplitudes, random_pure(dims, 43).amplitudes);
    EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
}

TEST(Sampling, NormalMoments) {
    Rng rng(9);
    double sum = 0, sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sq += x * x;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(Sampling, DensityProperties) {
    const Dims dims{2, 2};
    const auto rho = random_density(dims, 4, 2);
    EXPECT_TRUE(is_hermitian(rho));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho.entries);
    EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-12);
    EXPECT_NEAR(eig.eigenvalues()(0), 0.0, 1e-12);  // rank 2 in dimension 4
    EXPECT_NEAR(eig.eigenvalues()(1), 0.0, 1e-12);
    const auto h = random_hermitian(dims, 4);
    EXPECT_TRUE(is_hermitian(h));
}

TEST(Haar, UnitaryAndPhaseSpread) {
    Rng rng(17);
    std::complex<double> mean_trace = 0;
    const int n = 2000;
    for (int i = 0; i < n; ++i) {
        const Matrix u = haar_unitary(3, rng);
        ASSERT_LT(max_diff(u * u.adjoint(), Matrix::Identity(3, 3)), 1e-12);
        mean_trace += u.trace();
    }
    // E[Tr U] = 0 and E|Tr U|² = 1 under the Haar measure
    EXPECT_LT(std::abs(mean_trace / double(n)), 0.08);
}

TEST(LocalUnitaries, MatchKroneckerProduct) {
    const Dims dims{2, 3, 2};
    const auto us = random_local_unitaries(dims, 23);
    const Matrix u = kron_all(us);
    const auto psi = random_pure(dims, 1);
    EXPECT_LT((apply_local_unitaries(psi, us).amplitudes - u * psi.amplitudes).cwiseAbs().maxCoeff(), 1e-12);
    const auto rho = random_density(dims, 2, 3);
    EXPECT_LT(max_diff(apply_local_unitaries(rho, us).entries, u * rho.entries * u.adjoint()), 1e-12);
    EXPECT_THROW(apply_local_unitaries(psi, {us[0]}), std::invalid_argument);
}

TEST(Purify, RoundTrip) {
    for (int rank : {1, 2, 4}) {
        const auto rho = random_density(Dims{2, 2}, static_cast<std::uint64_t>(rank), rank);
        const auto psi = purify(rho);
        EXPECT_EQ(psi.dims.parties(), 3);
        EXPECT_EQ(psi.dims[3], rank);
        const auto back = partial_trace(projector(psi), SubsystemSet{3});
        EXPECT_LT(max_diff(back.entries, rho.entries), 1e-12 * rho.entries.norm()) << "rank " << rank;
    }
}

TEST(Purify, RejectsIndefinite) {
    DensityMatrix bad(Dims{2}, Matrix::Identity(2, 2));
    bad.entries(1, 1) = -1.0;
    EXPECT_THROW(purify(bad), std::invalid_argument);
}
