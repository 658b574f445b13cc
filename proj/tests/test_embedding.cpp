#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ille/embedding.hpp"
#include "test_util.hpp"

using namespace ille;

namespace {

// Route 1: the sum as written, explicit loops.
double objective_termwise(const Eigen::MatrixXd& Y, const GraphWeights& G) {
    const Eigen::Index n = G.size();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd resid = Y.col(i);
        for (Eigen::Index j = 0; j < n; ++j) {
            resid -= (G.z(i, j) / G.degrees(i)) * Y.col(j);
        }
        total += G.degrees(i) * resid.squaredNorm();
    }
    return total;
}

// Route 2: Tr(Y D^{1/2} (I - Z~)^2 D^{1/2} Y^T).
double objective_trace_form(const Eigen::MatrixXd& Y, const GraphWeights& G) {
    const Eigen::Index n = G.size();
    const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - G.z_tilde;
    const Eigen::MatrixXd dsqrt = G.degrees.array().sqrt().matrix().asDiagonal();
    return (Y * dsqrt * M * M * dsqrt * Y.transpose()).trace();
}

GraphWeights two_node_graph() {
    Eigen::MatrixXd Z(2, 2);
    Z << 0, 1, 1, 0;
    return build_graph(Z);
}

} // namespace

TEST_CASE("build_graph basic normalizations") {
    SUBCASE("edge pair") {
        const GraphWeights G = two_node_graph();
        CHECK(G.degrees(0) == 1.0);
        CHECK(G.degrees(1) == 1.0);
        CHECK(G.z_tilde.isApprox(G.z));
    }
    SUBCASE("self-loops only") {
        const GraphWeights G = build_graph(Eigen::MatrixXd::Identity(3, 3));
        CHECK(G.degrees.isApprox(Eigen::VectorXd::Ones(3)));
        CHECK(G.z_tilde.isApprox(Eigen::MatrixXd::Identity(3, 3)));
    }
    SUBCASE("elementwise normalization on random affinities") {
        auto rng = testutil::make_rng(4);
        const Eigen::MatrixXd Z = testutil::random_affinity(rng, 5);
        const GraphWeights G = build_graph(Z);
        for (Eigen::Index i = 0; i < 5; ++i)
            for (Eigen::Index j = 0; j < 5; ++j)
                CHECK(G.z_tilde(i, j) ==
                      doctest::Approx(Z(i, j) / std::sqrt(G.degrees(i) * G.degrees(j)))
                          .epsilon(1e-12));
    }
}

TEST_CASE("build_graph validation") {
    Eigen::MatrixXd asym(2, 2);
    asym << 0, 1, 0, 0;
    CHECK_THROWS_AS(build_graph(asym), ValidationError);

    Eigen::MatrixXd neg(2, 2);
    neg << 0, -1, -1, 0;
    CHECK_THROWS_AS(build_graph(neg), ValidationError);

    CHECK_THROWS_AS(build_graph(Eigen::MatrixXd::Zero(3, 3)), ValidationError);
}

TEST_CASE("build_graph repairs isolated nodes with a tiny self-loop") {
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(3, 3);
    Z(0, 1) = Z(1, 0) = 2.0; // node 2 isolated
    const GraphWeights G = build_graph(Z);
    CHECK(G.degrees.minCoeff() > 0.0);
    CHECK(G.degrees(2) == doctest::Approx(2e-10));
    CHECK(G.z_tilde.allFinite());
}

TEST_CASE("embed on the two-node graph") {
    const GraphWeights G = two_node_graph();
    const Embedding e = embed(G, 1);
    CHECK(e.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(e.coords(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(e.coords(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("embed of any connected graph keeps the trivial direction first") {
    auto rng = testutil::make_rng(21);
    const GraphWeights G = build_graph(testutil::random_affinity(rng, 6));
    const Embedding e = embed(G, 1);
    // constant row: (I - Z~) D^{1/2} e = 0
    const double spread = e.coords.row(0).maxCoeff() - e.coords.row(0).minCoeff();
    CHECK(spread <= 1e-10);
    CHECK(e.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("embed separates graph components") {
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(5, 5);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) Z(i, j) = 1.0;
    Z(3, 4) = Z(4, 3) = 1.0;
    const GraphWeights G = build_graph(Z);
    const Embedding e = embed(G, 2);
    CHECK(e.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(e.eigenvalues(1) == doctest::Approx(0.0).epsilon(1e-10));
    for (int r = 0; r < 2; ++r) {
        CHECK(e.coords(r, 0) == doctest::Approx(e.coords(r, 1)).epsilon(1e-9));
        CHECK(e.coords(r, 0) == doctest::Approx(e.coords(r, 2)).epsilon(1e-9));
        CHECK(e.coords(r, 3) == doctest::Approx(e.coords(r, 4)).epsilon(1e-9));
    }
}

TEST_CASE("embed range checks") {
    const GraphWeights G = two_node_graph();
    CHECK_THROWS_AS(embed(G, 3), ParameterError);
    CHECK_THROWS_AS(embed(G, 0), ParameterError);
    CHECK_THROWS_AS(embed(G, 2, EmbedOptions{true}), ParameterError);
}

TEST_CASE("embed invariants on random graphs") {
    auto rng = testutil::make_rng(3141);
    for (int trial = 0; trial < 8; ++trial) {
        const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng() % 12);
        const GraphWeights G = build_graph(testutil::random_affinity(rng, n));
        const int k = 1 + static_cast<int>(rng() % 3);
        const Embedding e = embed(G, k);

        // D-orthogonality
        const Eigen::MatrixXd gram =
            e.coords * G.degrees.asDiagonal() * e.coords.transpose();
        CHECK((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-8);

        // eigen residual of (I - Z~)^2 and spectrum bounds
        const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - G.z_tilde;
        const Eigen::MatrixXd M2 = M * M;
        const Eigen::MatrixXd F =
            G.degrees.array().sqrt().matrix().asDiagonal() * e.coords.transpose();
        for (int j = 0; j < k; ++j) {
            CHECK((M2 * F.col(j) - e.eigenvalues(j) * F.col(j)).norm() <= 1e-8);
            CHECK(e.eigenvalues(j) >= 0.0);
            CHECK(e.eigenvalues(j) <= 4.0 + 1e-9);
            if (j > 0) CHECK(e.eigenvalues(j) >= e.eigenvalues(j - 1));
        }
    }
}

TEST_CASE("normalized_cut_indicators") {
    SUBCASE("two-node graph") {
        const CutIndicators ci = normalized_cut_indicators(two_node_graph(), 1);
        CHECK(ci.g(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(ci.g(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(ci.h.isApprox(ci.g, 1e-12));
    }
    SUBCASE("component indicator span") {
        Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(5, 5);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) Z(i, j) = 0.7;
        Z(3, 4) = Z(4, 3) = 1.3;
        const CutIndicators ci = normalized_cut_indicators(build_graph(Z), 2);
        Eigen::MatrixXd ind = Eigen::MatrixXd::Zero(5, 2);
        ind.col(0).head(3).setOnes();
        ind.col(1).tail(2).setOnes();
        CHECK(testutil::largest_principal_angle(ci.h, ind) <= 1e-8);
    }
    SUBCASE("full basis at k = n") {
        auto rng = testutil::make_rng(6);
        const GraphWeights G = build_graph(testutil::random_affinity(rng, 5));
        const CutIndicators ci = normalized_cut_indicators(G, 5);
        CHECK((ci.g.transpose() * ci.g - Eigen::MatrixXd::Identity(5, 5))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-8);
    }
}

TEST_CASE("lle_objective values and dual formula routes") {
    auto rng = testutil::make_rng(2718);
    const GraphWeights G = build_graph(testutil::random_affinity(rng, 7));

    SUBCASE("constant coordinates cost nothing") {
        Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(2, 7);
        Y.row(0).setConstant(3.5);
        Y.row(1).setConstant(-1.25);
        CHECK(lle_objective(Y, G) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("optimal k=1 embedding of the edge pair") {
        const GraphWeights pair = two_node_graph();
        CHECK(lle_objective(embed(pair, 1), pair) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("random coordinates match both independent routes") {
        for (int trial = 0; trial < 5; ++trial) {
            const Eigen::MatrixXd Y = testutil::random_points(rng, 3, 7);
            const double impl = lle_objective(Y, G);
            CHECK(impl == doctest::Approx(objective_termwise(Y, G)).epsilon(1e-10));
            CHECK(impl == doctest::Approx(objective_trace_form(Y, G)).epsilon(1e-10));
        }
    }
    SUBCASE("shape mismatch") {
        CHECK_THROWS_AS(lle_objective(Eigen::MatrixXd::Zero(2, 6), G), ShapeError);
    }
}

TEST_CASE("shift invariance of the objective") {
    auto rng = testutil::make_rng(1618);
    const GraphWeights G = build_graph(testutil::random_affinity(rng, 8));
    const Eigen::MatrixXd Y = testutil::random_points(rng, 2, 8);
    const double base = lle_objective(Y, G);
    std::normal_distribution<double> gauss(0.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd c(2);
        c << gauss(rng), gauss(rng);
        Eigen::MatrixXd shifted = Y;
        shifted.colwise() -= c;
        CHECK(std::abs(lle_objective(shifted, G) - base) <= 1e-10);
    }
}

TEST_CASE("embedding is optimal among D-orthonormal competitors") {
    auto rng = testutil::make_rng(424242);
    for (int trial = 0; trial < 5; ++trial) {
        const GraphWeights G = build_graph(testutil::random_affinity(rng, 9));
        const Embedding e = embed(G, 2);
        const double best = lle_objective(e, G);
        CHECK(best == doctest::Approx(e.eigenvalues.sum()).epsilon(1e-8));
        for (int comp = 0; comp < 20; ++comp) {
            const Eigen::MatrixXd Y = testutil::random_d_orthonormal(rng, 2, G.degrees);
            CHECK(best <= lle_objective(Y, G) + 1e-10);
        }
    }
}

TEST_CASE("embedding subspace equals the normalized-cut subspace") {
    auto rng = testutil::make_rng(987);
    for (int trial = 0; trial < 6; ++trial) {
        const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng() % 10);
        const GraphWeights G = build_graph(testutil::random_affinity(rng, n));
        const int k = 2;
        const Embedding e = embed(G, k);
        const CutIndicators ci = normalized_cut_indicators(G, k);
        CHECK(testutil::largest_principal_angle(e.coords.transpose(), ci.h) <= 1e-7);

        // mu^2 = lambda against an independent eigenvalue read
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n) - G.z_tilde));
        for (int j = 0; j < k; ++j) {
            const double mu = es.eigenvalues()(j);
            CHECK(std::abs(e.eigenvalues(j) - mu * mu) <= 1e-9);
        }
    }
}

TEST_CASE("drop_trivial skips the constant direction") {
    auto rng = testutil::make_rng(111);
    const GraphWeights G = build_graph(testutil::random_affinity(rng, 6));
    const Embedding e = embed(G, 1, EmbedOptions{true});
    const double spread = e.coords.row(0).maxCoeff() - e.coords.row(0).minCoeff();
    CHECK(spread > 1e-6);
    const Eigen::MatrixXd gram = e.coords * G.degrees.asDiagonal() * e.coords.transpose();
    CHECK(std::abs(gram(0, 0) - 1.0) <= 1e-8);
}
