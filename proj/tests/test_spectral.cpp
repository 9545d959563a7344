#include "basic/errors.hpp"
#include "basic/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

using namespace basic;

namespace {

// O(n^2 * deg) reference for the aggregated matrix, entry by entry.
Eigen::MatrixXd aggregate_reference(const SymmetricAdjacency& a,
                                    const std::vector<BipartiteAdjacency>& bs) {
    const Index n = a.node_count();
    Eigen::MatrixXd ad = a.dense();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            double s = 0.0;
            for (Index k = 0; k < n; ++k) s += ad(i, k) * ad(j, k);
            m(i, j) = s;
        }
    for (const auto& b : bs) {
        Eigen::MatrixXd bd = b.dense();
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) {
                double s = 0.0;
                for (Index k = 0; k < b.side_count(); ++k) s += bd(i, k) * bd(j, k);
                m(i, j) += s;
            }
    }
    return m;
}

SymmetricAdjacency random_graph(Index n, double p, Rng& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (coin(rng)) edges.emplace_back(i, j);
    return SymmetricAdjacency(n, edges);
}

BipartiteAdjacency random_bipartite(Index n, Index m, double p, Rng& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j)
            if (coin(rng)) edges.emplace_back(i, j);
    return BipartiteAdjacency(n, m, edges);
}

} // namespace

TEST_CASE("aggregate with no bipartite input is the adjacency square") {
    Rng rng(1);
    auto a = random_graph(12, 0.4, rng);
    Eigen::MatrixXd ad = a.dense();
    CHECK(aggregate(a, {}).isApprox(ad * ad, 1e-14));
}

TEST_CASE("aggregate hand examples") {
    // path 0-1 plus one bipartite edge from node 0
    SymmetricAdjacency a(2, {{0, 1}});
    BipartiteAdjacency b(2, 1, {{0, 0}});
    Eigen::MatrixXd m = aggregate(a, {b});
    CHECK(m(0, 0) == 2.0);  // A^2 contributes 1, BB^T contributes 1
    CHECK(m(1, 1) == 1.0);
    CHECK(m(0, 1) == 0.0);

    // shared bipartite neighbor creates an off-diagonal entry
    BipartiteAdjacency shared(2, 1, {{0, 0}, {1, 0}});
    Eigen::MatrixXd m2 = aggregate(SymmetricAdjacency(2, {}), {shared});
    CHECK(m2(0, 0) == 1.0);
    CHECK(m2(0, 1) == 1.0);
    CHECK(m2(1, 0) == 1.0);
    CHECK(m2(1, 1) == 1.0);
}

TEST_CASE("aggregate matches the entrywise reference on random inputs") {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        Index n = 5 + static_cast<Index>(trial % 26);  // 5..30
        auto a = random_graph(n, 0.3, rng);
        std::vector<BipartiteAdjacency> bs;
        int q = trial % 3;
        for (int k = 0; k < q; ++k) bs.push_back(random_bipartite(n, n / 2 + 2, 0.3, rng));
        Eigen::MatrixXd m = aggregate(a, bs);
        CHECK((m - aggregate_reference(a, bs)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(m.isApprox(m.transpose(), 1e-14));
        // positive semidefinite: smallest eigenvalue not materially negative
        Eigen::VectorXd ev = spectrum_abs_sorted(m);
        CHECK(ev.minCoeff() >= -1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("top_k_eigen identity and fixed diagonal cases") {
    auto eye = top_k_eigen(Eigen::MatrixXd::Identity(4, 4), 2);
    CHECK(eye.values(0) == doctest::Approx(1.0));
    CHECK(eye.values(1) == doctest::Approx(1.0));

    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
    d.diagonal() << 4.0, 1.0, -2.0;
    auto p = top_k_eigen(d, 2);
    CHECK(p.values(0) == doctest::Approx(4.0));
    CHECK(p.values(1) == doctest::Approx(-2.0));  // |.|-descending keeps the sign
    CHECK(std::abs(p.vectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(p.vectors(2, 1)) == doctest::Approx(1.0));
    // leading eigenvector sign fixed to positive sum
    CHECK(p.vectors.col(0).sum() > 0.0);
}

TEST_CASE("top_k_eigen satisfies the residual contract") {
    Rng rng(3);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Index n = 20 + 5 * static_cast<Index>(trial);
        Eigen::MatrixXd g(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) g(i, j) = noise(rng);
        Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
        auto p = top_k_eigen(sym, 4);
        double op = spectrum_abs_sorted(sym).cwiseAbs().maxCoeff();
        for (Index k = 0; k < 4; ++k) {
            double res = (sym * p.vectors.col(k) - p.values(k) * p.vectors.col(k)).norm();
            CHECK(res <= 1e-8 * op);
        }
        CHECK((p.vectors.transpose() * p.vectors - Eigen::MatrixXd::Identity(4, 4))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-10);
    }
}

TEST_CASE("iterative path agrees with the dense path") {
    Rng rng(4);
    auto a = random_graph(60, 0.2, rng);
    auto bs = std::vector<BipartiteAdjacency>{random_bipartite(60, 30, 0.2, rng)};
    Eigen::MatrixXd m = aggregate(a, bs);

    EigenOptions dense_opts;  // n=60 stays dense
    EigenOptions lanczos_opts;
    lanczos_opts.dense_limit = 10;  // force the iterative branch
    auto pd = top_k_eigen(m, 3, dense_opts);
    auto pl = top_k_eigen(m, 3, lanczos_opts);
    CHECK((pd.values - pl.values).cwiseAbs().maxCoeff() <=
          1e-7 * pd.values.cwiseAbs().maxCoeff());
    // vectors agree up to sign
    for (Index k = 0; k < 3; ++k) {
        double dot = std::abs(pd.vectors.col(k).dot(pl.vectors.col(k)));
        CHECK(dot == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("score_ratio clamps and resolves zero entries") {
    EigenPack eig;
    eig.values = Eigen::VectorXd::Ones(2);
    eig.vectors = Eigen::MatrixXd(4, 2);
    eig.vectors << 0.5, 0.25,    // plain ratio 0.5
                   0.1, -5.0,    // magnitude above the clamp
                   0.5, 0.0,     // sgn(0) = 0
                   0.0, 0.3;     // zero leading entry -> clamp, numerator sign
    Eigen::MatrixXd r = score_ratio(eig, 2.0);
    CHECK(r(0, 0) == doctest::Approx(0.5));
    CHECK(r(1, 0) == doctest::Approx(-2.0));
    CHECK(r(2, 0) == 0.0);
    CHECK(r(3, 0) == doctest::Approx(2.0));
}

TEST_CASE("basic_detect recovers a planted two-block partition") {
    // strong within-block probability, sparse across: exact recovery
    Eigen::VectorXd theta = Eigen::VectorXd::Ones(60);
    auto memb = sequential_membership({30, 30});
    auto mm = dcbm_mean(theta, memb, out_in_transition(0.05, 2), 18.0);
    Rng draw = substream(11, {0});
    auto a = sample_symmetric(mm.omega, draw);
    Rng rng(12);
    auto res = basic_detect(a, {}, 2, {}, rng);
    CHECK(ari(res.labels, memb.labels) == 1.0);
    CHECK(res.eigenvalues.size() == 2);
    CHECK(res.ratio.rows() == 60);
    CHECK(res.ratio.cols() == 1);
}

TEST_CASE("score_detect is basic_detect with no bipartite networks") {
    Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        auto a = random_graph(40, 0.25, rng);
        Rng r1(100 + trial), r2(100 + trial);
        auto viaBasic = basic_detect(a, {}, 3, {}, r1);
        auto viaScore = score_detect(a, 3, {}, r2);
        CHECK(viaBasic.labels == viaScore.labels);
        CHECK((viaBasic.eigenvalues - viaScore.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("detection is equivariant under node relabeling") {
    Eigen::VectorXd theta = Eigen::VectorXd::Ones(40);
    auto memb = sequential_membership({20, 20});
    auto mm = dcbm_mean(theta, memb, out_in_transition(0.05, 2), 14.0);
    Rng draw = substream(21, {0});
    auto a = sample_symmetric(mm.omega, draw);

    // reverse the node order
    std::vector<Index> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    std::vector<Edge> mapped;
    for (auto [i, j] : a.edges()) mapped.emplace_back(perm[i], perm[j]);
    SymmetricAdjacency ap(40, mapped);

    Rng r1(31), r2(31);
    auto res = basic_detect(a, {}, 2, {}, r1);
    auto resp = basic_detect(ap, {}, 2, {}, r2);
    Labels pulled(40);
    for (Index i = 0; i < 40; ++i) pulled[i] = resp.labels[perm[i]];
    CHECK(ari(res.labels, pulled) == 1.0);
}

TEST_CASE("basic_detect validates K") {
    Rng rng(6);
    auto a = random_graph(10, 0.5, rng);
    CHECK_THROWS_AS(basic_detect(a, {}, 1, {}, rng), DomainError);
}
