#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ille/embedding.hpp"
#include "ille/kernel.hpp"
#include "test_util.hpp"

using namespace ille;

namespace {

Embedding embedding_of(const Eigen::MatrixXd& coords) {
    Embedding e;
    e.coords = coords;
    e.eigenvalues = Eigen::VectorXd::Zero(coords.rows());
    return e;
}

} // namespace

TEST_CASE("gaussian_kernel closed-form values") {
    Eigen::MatrixXd X(2, 2);
    X << 0, 0, 1, 0;
    const Kernel K = gaussian_kernel(X, 1.0);
    CHECK(K.values(0, 0) == 1.0);
    CHECK(K.values(1, 1) == 1.0);
    CHECK(K.values(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(K.values(0, 1) == K.values(1, 0));
}

TEST_CASE("gaussian_kernel coincident points give similarity 1") {
    Eigen::MatrixXd X(3, 2);
    X << 0.5, -0.25, 0.5, -0.25, 2.0, 1.0;
    const Kernel K = gaussian_kernel(X, 3.0);
    CHECK(K.values(0, 1) == 1.0);
}

TEST_CASE("gaussian_kernel rejects bad input") {
    Eigen::MatrixXd X(2, 1);
    X << 0.0, 1.0;
    CHECK_THROWS_AS(gaussian_kernel(X, 0.0), ParameterError);
    CHECK_THROWS_AS(gaussian_kernel(X, -1.0), ParameterError);
    X(1, 0) = std::nan("");
    CHECK_THROWS_AS(gaussian_kernel(X, 1.0), ValidationError);
    CHECK_THROWS_AS(gaussian_kernel(Eigen::MatrixXd(0, 2), 1.0), ValidationError);
}

TEST_CASE("gaussian_kernel invariants on random data") {
    auto rng = testutil::make_rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::MatrixXd X = testutil::random_points(rng, 8, 3);
        const Kernel K = gaussian_kernel(X, 0.7);
        validate_kernel(K);
        CHECK(K.values.minCoeff() > 0.0);
        CHECK(K.values.maxCoeff() <= 1.0);
        for (int i = 0; i < 8; ++i) CHECK(K.values(i, i) == 1.0);

        // increasing gamma never increases any off-diagonal entry
        const Kernel K2 = gaussian_kernel(X, 1.4);
        CHECK(((K.values - K2.values).minCoeff()) >= 0.0);
    }
}

TEST_CASE("linear_kernel matches direct Gram products") {
    SUBCASE("orthonormal points") {
        Eigen::MatrixXd X(2, 2);
        X << 1, 0, 0, 1;
        const Kernel K = linear_kernel(X);
        CHECK(K.values.isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-15));
    }
    SUBCASE("single point") {
        Eigen::MatrixXd X(1, 2);
        X << 3, 4;
        CHECK(linear_kernel(X).values(0, 0) == doctest::Approx(25.0));
    }
    SUBCASE("random nonnegative points stay nonnegative and PSD") {
        auto rng = testutil::make_rng(3);
        const Eigen::MatrixXd X = testutil::random_points(rng, 3, 4, 0.0, 1.0);
        const Kernel K = linear_kernel(X);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(K.values(i, j) == doctest::Approx(X.row(i).dot(X.row(j))).epsilon(1e-14));
        CHECK(K.values.minCoeff() >= 0.0);
        CHECK(check_psd(K).psd);
    }
}

TEST_CASE("kernel_from_embedding") {
    SUBCASE("identical columns, gaussian -> all ones") {
        Eigen::MatrixXd Y(2, 4);
        Y << 1, 1, 1, 1, -2, -2, -2, -2;
        const Kernel K = kernel_from_embedding(embedding_of(Y), KernelMethod::gaussian, 0.5);
        CHECK(K.values.isApprox(Eigen::MatrixXd::Ones(4, 4), 1e-15));
    }
    SUBCASE("orthonormal columns, linear -> identity") {
        Eigen::MatrixXd Y = Eigen::MatrixXd::Identity(3, 3);
        const Kernel K = kernel_from_embedding(embedding_of(Y), KernelMethod::linear);
        CHECK(K.values.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-15));
    }
    SUBCASE("gaussian entries match a hand distance table") {
        Eigen::MatrixXd Y(2, 4);
        Y << 0, 1, 0, 2, 0, 0, 1, 1;
        const Kernel K = kernel_from_embedding(embedding_of(Y), KernelMethod::gaussian, 0.5);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const double d2 = (Y.col(i) - Y.col(j)).squaredNorm();
                CHECK(K.values(i, j) == doctest::Approx(std::exp(-0.5 * d2)).epsilon(1e-14));
            }
        }
    }
    SUBCASE("invalid gamma") {
        Eigen::MatrixXd Y(1, 3);
        Y << 0, 1, 2;
        CHECK_THROWS_AS(kernel_from_embedding(embedding_of(Y), KernelMethod::gaussian, -2.0),
                        ParameterError);
    }
    SUBCASE("median heuristic default is scale-adaptive") {
        Eigen::MatrixXd Y(1, 3);
        Y << 0, 1, 2;
        // distances {1,1,2}, median 1 -> gamma = 0.5
        const Kernel K = kernel_from_embedding(embedding_of(Y), KernelMethod::gaussian);
        CHECK(K.values(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
        CHECK(K.values(0, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    }
}

TEST_CASE("combine_kernels identities and errors") {
    auto rng = testutil::make_rng(5);
    const Kernel A = testutil::random_nonneg_psd_kernel(rng, 4, true);
    const Kernel ones{Eigen::MatrixXd::Ones(4, 4)};
    const Kernel zero{Eigen::MatrixXd::Zero(4, 4)};

    CHECK(combine_kernels(A, ones, CombineMode::multiplicative).values.isApprox(A.values));
    CHECK(combine_kernels(A, zero, CombineMode::additive).values.isApprox(A.values));
    CHECK(combine_kernels(A, ones, CombineMode::replace).values.isApprox(ones.values));

    const Kernel small{Eigen::MatrixXd::Ones(3, 3)};
    CHECK_THROWS_AS(combine_kernels(A, small, CombineMode::additive), ShapeError);
}

TEST_CASE("combine_kernels is commutative for additive and multiplicative") {
    auto rng = testutil::make_rng(11);
    const Kernel A = testutil::random_nonneg_psd_kernel(rng, 5, true);
    const Kernel B = testutil::random_nonneg_psd_kernel(rng, 5, false);
    for (const auto mode : {CombineMode::additive, CombineMode::multiplicative}) {
        CHECK(combine_kernels(A, B, mode).values.isApprox(combine_kernels(B, A, mode).values));
    }
}

TEST_CASE("Hadamard product of PSD kernels stays PSD") {
    auto rng = testutil::make_rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const Kernel A = testutil::random_nonneg_psd_kernel(rng, 5, trial % 2 == 0);
        const Kernel B = testutil::random_nonneg_psd_kernel(rng, 5, trial % 2 == 1);
        const Kernel C = combine_kernels(A, B, CombineMode::multiplicative);
        const PsdReport r = check_psd(C, 0.0);
        CHECK(r.lambda_min >= -1e-10);
    }
}

TEST_CASE("check_psd") {
    CHECK(check_psd(Kernel{Eigen::MatrixXd::Identity(3, 3)}).psd);
    CHECK(check_psd(Kernel{Eigen::MatrixXd::Identity(3, 3)}).lambda_min ==
          doctest::Approx(1.0));

    Eigen::MatrixXd M(2, 2);
    M << 1, 2, 2, 1;
    const PsdReport r = check_psd(Kernel{M});
    CHECK_FALSE(r.psd);
    CHECK(r.lambda_min == doctest::Approx(-1.0).epsilon(1e-12));

    auto rng = testutil::make_rng(7);
    const Eigen::MatrixXd A = testutil::random_points(rng, 4, 6);
    CHECK(check_psd(Kernel{Eigen::MatrixXd(A * A.transpose())}).psd);

    Eigen::MatrixXd asym(2, 2);
    asym << 1, 0.5, 0, 1;
    CHECK_THROWS_AS(check_psd(Kernel{asym}), ShapeError);
}

TEST_CASE("shift_to_nonnegative lifts and preserves PSD") {
    Eigen::MatrixXd X(3, 2);
    X << 1, 0, -1, 0.5, 0.2, -2;
    const Kernel K = linear_kernel(X);
    REQUIRE(K.values.minCoeff() < 0.0);
    const Kernel S = shift_to_nonnegative(K);
    CHECK(S.values.minCoeff() == 0.0);
    CHECK(check_psd(S).psd);

    const Kernel already{Eigen::MatrixXd::Identity(2, 2)};
    CHECK(shift_to_nonnegative(already).values.isApprox(already.values));
}

TEST_CASE("median_pairwise_distance") {
    Eigen::MatrixXd Y(1, 4);
    Y << 0, 1, 3, 6; // distances {1,3,6,2,5,3} sorted {1,2,3,3,5,6} -> 3
    CHECK(median_pairwise_distance(Y) == doctest::Approx(3.0));
    Eigen::MatrixXd one(2, 1);
    one << 1, 2;
    CHECK(median_pairwise_distance(one) == 0.0);
}
