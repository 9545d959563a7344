#ifndef BASIC_GENMODEL_HPP
#define BASIC_GENMODEL_HPP

#include "basic/graph.hpp"
#include "basic/rng.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace basic {

/// Community labels, 0-based internally (files and reports are 1-based).
using Labels = std::vector<Index>;

/// Hard community assignment of n nodes into K non-empty communities.
struct Membership {
    Index n = 0;
    Index K = 0;
    Labels labels;  // values in 0..K-1

    Membership() = default;
    Membership(Index K_, Labels labels_);

    /// The induced n x K 0/1 indicator matrix (one 1 per row).
    Eigen::MatrixXd indicator() const;
};

/// labels = (0 repeated sizes[0], 1 repeated sizes[1], ...).
Membership sequential_membership(const std::vector<Index>& sizes);

/// (1-beta) I_K + beta 1 1^T: unit diagonal, beta off-diagonal.
Eigen::MatrixXd out_in_transition(double beta, Index K);

/// Pareto(scale=lower, shape=alpha) draws via inverse CDF, then min-max
/// normalized (with a 1e-6 floor) so all entries lie in (0,1] with max
/// exactly 1. A single draw normalizes to exactly 1.
Eigen::VectorXd power_law_degrees(Index count, Rng& rng, double alpha = 5.0, double lower = 1.0);

struct MeanMatrix {
    Eigen::MatrixXd omega;
    double scale = 1.0;   // applied normalizing factor
    long clipped = 0;     // entries clipped to [0,1] after scaling
};

/// DCBM edge-probability matrix: diag(theta) X Pi X^T diag(theta) with a
/// zeroed diagonal, rescaled so the mean expected degree is avg_degree
/// (up to clipping loss).
MeanMatrix dcbm_mean(const Eigen::VectorXd& theta, const Membership& memb,
                     const Eigen::MatrixXd& trans, double avg_degree);

/// BiDCBM edge-probability matrix: diag(theta) X_t F X_s^T diag(delta),
/// rescaled so the mean expected primary-node row-sum is avg_degree.
MeanMatrix bidcbm_mean(const Eigen::VectorXd& theta, const Eigen::VectorXd& delta,
                       const Membership& memb_t, const Membership& memb_s,
                       const Eigen::MatrixXd& trans, double avg_degree);

/// One Bernoulli draw per unordered pair, mirrored, zero diagonal.
SymmetricAdjacency sample_symmetric(const Eigen::MatrixXd& omega, Rng& rng);

/// Independent Bernoulli per cell.
BipartiteAdjacency sample_bipartite(const Eigen::MatrixXd& omega, Rng& rng);

/// One simulation cell of the experiment design.
struct ScenarioConfig {
    Index n = 600;
    Index m = 300;
    Index K = 3;
    Index Kp = 3;  // bipartite-side community count K'
    Index Q = 5;
    std::vector<Index> community_sizes;            // length K, sums to n
    std::vector<Index> bipartite_community_sizes;  // length K', sums to m
    double beta_primary = 0.5;
    std::vector<double> beta_bipartite;            // length Q
    double avg_degree = 40.0;
    int replications = 200;
    std::uint64_t seed = 0;
    bool redraw_theta = true;  // fresh theta per replication

    void validate() const;
    static std::vector<Index> balanced_sizes(Index total, Index K);
};

std::string to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const std::string& text);

struct ScenarioDraw {
    SymmetricAdjacency primary;
    std::vector<BipartiteAdjacency> bipartite;
    Labels truth;  // primary ground-truth labels
};

/// One full draw of a scenario, reproducible from (cfg.seed, scenario_id,
/// replication): independent RNG substreams per network, so changing one
/// bipartite beta never perturbs the other draws.
ScenarioDraw build_scenario(const ScenarioConfig& cfg, std::uint64_t scenario_id, int replication);

} // namespace basic

#endif // BASIC_GENMODEL_HPP
