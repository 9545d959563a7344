#include "basic/genmodel.hpp"

#include "basic/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace basic {

Membership::Membership(Index K_, Labels labels_)
    : n(static_cast<Index>(labels_.size())), K(K_), labels(std::move(labels_)) {
    if (K < 1) throw DomainError("community count must be >= 1");
    std::vector<Index> counts(K, 0);
    for (Index l : labels) {
        if (l < 0 || l >= K) throw DomainError("label out of range");
        ++counts[l];
    }
    for (Index k = 0; k < K; ++k)
        if (counts[k] == 0) throw DomainError("empty community " + std::to_string(k + 1));
}

Eigen::MatrixXd Membership::indicator() const {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, K);
    for (Index i = 0; i < n; ++i) x(i, labels[i]) = 1.0;
    return x;
}

Membership sequential_membership(const std::vector<Index>& sizes) {
    Labels labels;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (sizes[k] < 1) throw DomainError("community size must be >= 1");
        labels.insert(labels.end(), sizes[k], static_cast<Index>(k));
    }
    return Membership(static_cast<Index>(sizes.size()), std::move(labels));
}

Eigen::MatrixXd out_in_transition(double beta, Index K) {
    if (beta < 0.0 || beta > 1.0) throw DomainError("out-in ratio must be in [0,1]");
    if (K < 1) throw DomainError("K must be >= 1");
    Eigen::MatrixXd pi = Eigen::MatrixXd::Constant(K, K, beta);
    pi.diagonal().setOnes();
    return pi;
}

Eigen::VectorXd power_law_degrees(Index count, Rng& rng, double alpha, double lower) {
    if (count < 1) throw DomainError("count must be >= 1");
    if (alpha <= 1.0 || lower <= 0.0) throw DomainError("invalid power-law parameters");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd d(count);
    for (Index i = 0; i < count; ++i) {
        double u = unif(rng);
        if (u == 0.0) u = 1e-300;
        d[i] = lower * std::pow(u, -1.0 / alpha);
    }
    // min-max normalization with a small positive floor: entries stay in
    // (0,1] with max exactly 1, and the weakest node keeps a tiny but
    // nonzero connection propensity
    const double lo = d.minCoeff(), hi = d.maxCoeff();
    if (hi > lo)
        d = ((d.array() - lo) / (hi - lo)).max(1e-6);
    else
        d.setOnes();
    return d;
}

namespace {

MeanMatrix finish_scaling(Eigen::MatrixXd w, double avg_degree, Index rows) {
    const double total = w.sum();
    if (total <= 0.0) throw NumericError("degenerate mean matrix: all-zero expectation");
    MeanMatrix out;
    out.scale = avg_degree * static_cast<double>(rows) / total;
    w *= out.scale;
    for (Index i = 0; i < w.rows(); ++i)
        for (Index j = 0; j < w.cols(); ++j)
            if (w(i, j) > 1.0) {
                w(i, j) = 1.0;
                ++out.clipped;
            }
    out.omega = std::move(w);
    return out;
}

} // namespace

MeanMatrix dcbm_mean(const Eigen::VectorXd& theta, const Membership& memb,
                     const Eigen::MatrixXd& trans, double avg_degree) {
    const Index n = memb.n;
    if (theta.size() != n) throw DomainError("theta length mismatch");
    if (trans.rows() != memb.K || trans.cols() != memb.K)
        throw DomainError("transition matrix dimension mismatch");
    if (!trans.isApprox(trans.transpose(), 1e-12))
        throw DomainError("primary transition matrix must be symmetric");
    if (avg_degree <= 0.0) throw DomainError("average degree must be positive");

    Eigen::MatrixXd w(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            w(i, j) = theta[i] * theta[j] * trans(memb.labels[i], memb.labels[j]);
    w.diagonal().setZero();
    return finish_scaling(std::move(w), avg_degree, n);
}

MeanMatrix bidcbm_mean(const Eigen::VectorXd& theta, const Eigen::VectorXd& delta,
                       const Membership& memb_t, const Membership& memb_s,
                       const Eigen::MatrixXd& trans, double avg_degree) {
    const Index n = memb_t.n, m = memb_s.n;
    if (theta.size() != n || delta.size() != m) throw DomainError("degree vector length mismatch");
    if (trans.rows() != memb_t.K || trans.cols() != memb_s.K)
        throw DomainError("transition matrix dimension mismatch");
    if (avg_degree <= 0.0) throw DomainError("average degree must be positive");

    Eigen::MatrixXd w(n, m);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j)
            w(i, j) = theta[i] * delta[j] * trans(memb_t.labels[i], memb_s.labels[j]);
    return finish_scaling(std::move(w), avg_degree, n);
}

SymmetricAdjacency sample_symmetric(const Eigen::MatrixXd& omega, Rng& rng) {
    const Index n = static_cast<Index>(omega.rows());
    if (omega.cols() != n) throw DomainError("omega must be square");
    if (!omega.isApprox(omega.transpose(), 1e-12)) throw DomainError("omega must be symmetric");
    if (omega.diagonal().cwiseAbs().maxCoeff() > 0.0) throw DomainError("omega diagonal must be zero");
    if (omega.minCoeff() < 0.0 || omega.maxCoeff() > 1.0)
        throw DomainError("omega entries must lie in [0,1]");

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (unif(rng) < omega(i, j)) edges.emplace_back(i, j);
    return SymmetricAdjacency(n, std::move(edges));
}

BipartiteAdjacency sample_bipartite(const Eigen::MatrixXd& omega, Rng& rng) {
    if (omega.minCoeff() < 0.0 || omega.maxCoeff() > 1.0)
        throw DomainError("omega entries must lie in [0,1]");
    const Index n = static_cast<Index>(omega.rows());
    const Index m = static_cast<Index>(omega.cols());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j)
            if (unif(rng) < omega(i, j)) edges.emplace_back(i, j);
    return BipartiteAdjacency(n, m, std::move(edges));
}

std::vector<Index> ScenarioConfig::balanced_sizes(Index total, Index K) {
    if (K < 1 || total < K) throw DomainError("cannot balance sizes");
    std::vector<Index> sizes(K, total / K);
    for (Index k = 0; k < total % K; ++k) ++sizes[k];
    return sizes;
}

void ScenarioConfig::validate() const {
    if (n < 1 || m < 0 || K < 1 || Kp < 1 || Q < 0) throw DomainError("invalid scenario dimensions");
    if (static_cast<Index>(community_sizes.size()) != K)
        throw DomainError("community_sizes length must equal K");
    if (std::accumulate(community_sizes.begin(), community_sizes.end(), Index{0}) != n)
        throw DomainError("community_sizes must sum to n");
    if (Q > 0) {
        if (static_cast<Index>(bipartite_community_sizes.size()) != Kp)
            throw DomainError("bipartite_community_sizes length must equal K'");
        if (std::accumulate(bipartite_community_sizes.begin(), bipartite_community_sizes.end(),
                            Index{0}) != m)
            throw DomainError("bipartite_community_sizes must sum to m");
        if (static_cast<Index>(beta_bipartite.size()) != Q)
            throw DomainError("beta_bipartite length must equal Q");
        for (double b : beta_bipartite)
            if (b < 0.0 || b > 1.0) throw DomainError("bipartite out-in ratio out of [0,1]");
    }
    if (beta_primary < 0.0 || beta_primary > 1.0) throw DomainError("out-in ratio out of [0,1]");
    if (avg_degree <= 0.0) throw DomainError("average degree must be positive");
    if (replications < 1) throw DomainError("replications must be >= 1");
}

std::string to_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["n"] = cfg.n;
    j["m"] = cfg.m;
    j["K"] = cfg.K;
    j["K_prime"] = cfg.Kp;
    j["Q"] = cfg.Q;
    j["community_sizes"] = cfg.community_sizes;
    j["bipartite_community_sizes"] = cfg.bipartite_community_sizes;
    j["beta_primary"] = cfg.beta_primary;
    j["beta_bipartite"] = cfg.beta_bipartite;
    j["avg_degree"] = cfg.avg_degree;
    j["replications"] = cfg.replications;
    j["seed"] = cfg.seed;
    j["redraw_theta"] = cfg.redraw_theta;
    return j.dump(2);
}

ScenarioConfig scenario_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad scenario JSON: ") + e.what());
    }
    ScenarioConfig cfg;
    try {
        cfg.n = j.at("n").get<Index>();
        cfg.m = j.value("m", Index{0});
        cfg.K = j.at("K").get<Index>();
        cfg.Kp = j.value("K_prime", cfg.K);
        cfg.Q = j.value("Q", Index{0});
        if (j.contains("community_sizes"))
            cfg.community_sizes = j["community_sizes"].get<std::vector<Index>>();
        else
            cfg.community_sizes = ScenarioConfig::balanced_sizes(cfg.n, cfg.K);
        if (j.contains("bipartite_community_sizes"))
            cfg.bipartite_community_sizes = j["bipartite_community_sizes"].get<std::vector<Index>>();
        else if (cfg.Q > 0)
            cfg.bipartite_community_sizes = ScenarioConfig::balanced_sizes(cfg.m, cfg.Kp);
        cfg.beta_primary = j.at("beta_primary").get<double>();
        if (j.contains("beta_bipartite"))
            cfg.beta_bipartite = j["beta_bipartite"].get<std::vector<double>>();
        else if (cfg.Q > 0)
            cfg.beta_bipartite.assign(cfg.Q, 0.5);  // plans override per case
        cfg.avg_degree = j.value("avg_degree", 40.0);
        cfg.replications = j.value("replications", 200);
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.redraw_theta = j.value("redraw_theta", true);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad scenario field: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ScenarioDraw build_scenario(const ScenarioConfig& cfg, std::uint64_t scenario_id, int replication) {
    cfg.validate();
    const std::uint64_t rep_stream = cfg.redraw_theta ? static_cast<std::uint64_t>(replication) : 0;

    // theta has its own stream so every network sees the same draw
    Rng theta_rng = substream(cfg.seed, {scenario_id, rep_stream, 1000});
    Eigen::VectorXd theta = power_law_degrees(cfg.n, theta_rng);

    Membership memb = sequential_membership(cfg.community_sizes);

    ScenarioDraw draw;
    draw.truth = memb.labels;

    {
        Rng rng = substream(cfg.seed, {scenario_id, static_cast<std::uint64_t>(replication), 0});
        Eigen::MatrixXd pi = out_in_transition(cfg.beta_primary, cfg.K);
        MeanMatrix omega = dcbm_mean(theta, memb, pi, cfg.avg_degree);
        draw.primary = sample_symmetric(omega.omega, rng);
    }

    if (cfg.Q > 0) {
        Membership memb_s = sequential_membership(cfg.bipartite_community_sizes);
        draw.bipartite.reserve(cfg.Q);
        for (Index q = 0; q < cfg.Q; ++q) {
            Rng rng = substream(cfg.seed,
                                {scenario_id, static_cast<std::uint64_t>(replication),
                                 static_cast<std::uint64_t>(q) + 1});
            Eigen::VectorXd delta = power_law_degrees(cfg.m, rng);
            // F aligns bipartite community k with primary community k;
            // rectangular when K' != K.
            Eigen::MatrixXd f = Eigen::MatrixXd::Constant(cfg.K, cfg.Kp, cfg.beta_bipartite[q]);
            for (Index k = 0; k < std::min(cfg.K, cfg.Kp); ++k) f(k, k) = 1.0;
            MeanMatrix omega = bidcbm_mean(theta, delta, memb, memb_s, f, cfg.avg_degree);
            draw.bipartite.push_back(sample_bipartite(omega.omega, rng));
        }
    }
    return draw;
}

} // namespace basic
