#ifndef BASIC_SPECTRAL_HPP
#define BASIC_SPECTRAL_HPP

#include "basic/clustering.hpp"
#include "basic/genmodel.hpp"
#include "basic/graph.hpp"

#include <Eigen/Core>
#include <vector>

namespace basic {

/// M = A A^T + sum_q B^(q) B^(q)T; symmetric positive semidefinite.
Eigen::MatrixXd aggregate(const SymmetricAdjacency& a,
                          const std::vector<BipartiteAdjacency>& bs);

struct EigenPack {
    Eigen::VectorXd values;   // K eigenvalues, descending by |.|
    Eigen::MatrixXd vectors;  // n x K, orthonormal columns
};

struct EigenOptions {
    /// Above this size the solver switches from dense to Lanczos with
    /// full reorthogonalization.
    Index dense_limit = 5000;
    double lanczos_tol = 1e-10;
    int lanczos_max_iter_per_pair = 300;
};

/// The K eigenpairs of largest absolute eigenvalue of a symmetric matrix.
/// The leading eigenvector's sign is fixed so its entry sum is positive.
EigenPack top_k_eigen(const Eigen::MatrixXd& m, Index K, const EigenOptions& opts = {});

/// All eigenvalues of a symmetric matrix, sorted descending by absolute
/// value (signed values preserved).
Eigen::VectorXd spectrum_abs_sorted(const Eigen::MatrixXd& m);

/// SCORE ratios: entry (i,k) = sgn(u_{k+1}(i)) * min(|u_{k+1}(i)/u_1(i)|, T_n).
/// A zero leading entry engages the clamp with the numerator's sign.
Eigen::MatrixXd score_ratio(const EigenPack& eig, double threshold);

struct DetectOptions {
    KMeansOptions kmeans;
    EigenOptions eigen;
    /// Clamp for the ratio matrix; <= 0 means the default ln(n).
    double threshold = 0.0;
};

struct DetectResult {
    Labels labels;
    Eigen::VectorXd eigenvalues;   // the K leading eigenvalues of M
    Eigen::MatrixXd ratio;         // the n x (K-1) ratio matrix
    double kmeans_inertia = 0.0;
};

/// Full pipeline: aggregate -> top-K eigenvectors -> SCORE ratios ->
/// k-means on the ratio rows.
DetectResult basic_detect(const SymmetricAdjacency& a,
                          const std::vector<BipartiteAdjacency>& bs,
                          Index K, const DetectOptions& opts, Rng& rng);

/// Primary-network-only baseline: basic_detect with no bipartite input.
DetectResult score_detect(const SymmetricAdjacency& a, Index K,
                          const DetectOptions& opts, Rng& rng);

} // namespace basic

#endif // BASIC_SPECTRAL_HPP
