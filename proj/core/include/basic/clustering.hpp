#ifndef BASIC_CLUSTERING_HPP
#define BASIC_CLUSTERING_HPP

#include "basic/genmodel.hpp"
#include "basic/rng.hpp"

#include <Eigen/Core>

namespace basic {

struct KMeansOptions {
    Index K = 2;
    int max_iter = 300;
    int n_init = 10;
    double tol = 1e-9;
    /// When non-empty, used as initial centers for a single run
    /// (overrides kmeans++ and n_init).
    Eigen::MatrixXd initial_centers;
};

struct KMeansResult {
    Labels labels;            // values in 0..K-1
    Eigen::MatrixXd centers;  // K x dim
    double inertia = 0.0;     // sum of squared point-to-center distances
};

/// Lloyd iterations from kmeans++ starts, best of n_init restarts by
/// inertia (ties broken by lowest restart index). An emptied cluster is
/// re-seeded at the point farthest from its assigned center.
/// Deterministic given the generator state.
KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& opts, Rng& rng);

/// Adjusted Rand Index between two labelings of the same nodes, by pair
/// counting. Returns 1.0 when the denominator vanishes (both partitions
/// trivial and equal).
double ari(const Labels& a, const Labels& b);

} // namespace basic

#endif // BASIC_CLUSTERING_HPP
