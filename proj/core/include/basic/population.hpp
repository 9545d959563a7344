#ifndef BASIC_POPULATION_HPP
#define BASIC_POPULATION_HPP

#include "basic/genmodel.hpp"
#include "basic/graph.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace basic {

/// Exact model parameters for population-level computations.
struct PopulationSpec {
    Eigen::VectorXd theta;            // length n, entries in (0,1]
    Eigen::VectorXd delta;            // length m; may be empty when Q = 0
    Membership memb_t;                // primary labels, K communities
    Membership memb_s;                // bipartite labels, K' communities
    Eigen::MatrixXd E;                // K x K symmetric
    std::vector<Eigen::MatrixXd> Fs;  // Q matrices, each K x K'

    Index n() const { return memb_t.n; }
    Index K() const { return memb_t.K; }
    Index Q() const { return static_cast<Index>(Fs.size()); }
    void validate() const;
};

/// Expectation matrices. The primary one carries a zero diagonal to match
/// the sampled adjacency exactly; full_diagonal restores the factored form.
struct PopulationMeans {
    Eigen::MatrixXd omega0;               // n x n, zero diagonal
    std::vector<Eigen::MatrixXd> omegas;  // Q of n x m
};

PopulationMeans population_means(const PopulationSpec& spec);

/// The reparameterized structure of the population aggregated matrix.
struct PopulationDecomposition {
    Eigen::MatrixXd omega_m;     // n x n (factored form, full diagonal)
    Eigen::MatrixXd sbar;        // K x K
    Eigen::MatrixXd theta_memb;  // n x K, orthonormal columns
    Eigen::MatrixXd delta_memb;  // m x K', orthonormal columns
    Eigen::VectorXd psi_theta;   // K community heterogeneity weights
    Eigen::VectorXd psi_delta;   // K'
    Eigen::MatrixXd J;           // K x K eigenvectors of sbar
    Eigen::VectorXd sigma;       // K eigenvalues of sbar, |.| descending
    Eigen::MatrixXd U;           // theta_memb * J
    Eigen::VectorXd lambdas;     // ||theta||^2 ||delta||^2 * sigma
    double gram_vs_factored = 0.0;   // relative Frobenius gap, full diagonal
    double diagonal_discrepancy = 0.0;  // gap to the zero-diagonal Gram sum
    bool rank_warning = false;          // sbar deficient below K
};

PopulationDecomposition population_aggregate(const PopulationSpec& spec);

struct Proposition1Report {
    double eigenvalue_dev = 0.0;  // relative, top-K plus trailing zeros
    double row_dev = 0.0;         // row formula, after sign alignment
    double row_norm_dev = 0.0;    // ||U_i|| vs theta_i/||theta^(l_i)||
    bool subspace_fallback = false;
    bool pass(double tol = 1e-9) const {
        return eigenvalue_dev <= tol && row_dev <= tol && row_norm_dev <= tol;
    }
};

/// Numerically verifies the eigenvalue formula, the eigenvector row
/// formula, and the row-norm identity of the population decomposition.
/// Falls back to subspace-projection distance inside eigenvalue
/// multiplicity blocks.
Proposition1Report check_proposition1(const PopulationSpec& spec,
                                      const PopulationDecomposition& decomp);

/// Ratio matrix of the population aggregated matrix (clamp = ln n).
Eigen::MatrixXd population_ratio(const PopulationDecomposition& decomp);

struct SeparationReport {
    double max_within_spread = 0.0;  // max row distance inside a community
    double min_between = 0.0;        // min row distance across communities
};

SeparationReport ratio_separation(const Eigen::MatrixXd& ratio, const Labels& labels);

struct DeviationReport {
    double lhs = 0.0;    // ||M - Omega_M||_op
    double rhs = 0.0;    // theoretical deviation scale
    double ratio = 0.0;  // lhs / rhs (0 when rhs is 0 and lhs is 0)
};

/// Operator-norm deviation of a sampled aggregate from its population
/// counterpart, against the theoretical scale
/// ||theta|| ||delta|| sqrt(ln(n) Z) max(max_q sigma_max(F^q), lambda_max(E)).
DeviationReport deviation_check(const SymmetricAdjacency& a,
                                const std::vector<BipartiteAdjacency>& bs,
                                const PopulationSpec& spec);

/// Monte-Carlo version over fresh draws from the spec.
struct DeviationSummary {
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
};
DeviationSummary deviation_mc(const PopulationSpec& spec, int draws, std::uint64_t seed);

/// Integrated signal-to-noise ratio of the aggregated pipeline.
double snr_basic(const Eigen::MatrixXd& E, const std::vector<Eigen::MatrixXd>& Fs);

/// lambda_min(E)^2 / lambda_max(E), eigenvalues ordered by |.|.
double snr_primary(const Eigen::MatrixXd& E);

/// 1 - lambda_{K+1}/lambda_K for eigenvalues sorted |.|-descending.
double eigengap_ratio(const Eigen::VectorXd& values, Index K);

/// Weak-signal flag threshold for the eigengap diagnostic.
inline constexpr double kWeakSignalEigengap = 0.1;

/// Assumption scale sqrt(ln(n) Z) / (||theta|| ||delta||): the largest
/// transition signal should dominate this for the theory to bite.
double signal_scale(const PopulationSpec& spec);

/// Randomized valid spec for verification sweeps: power-law theta/delta,
/// near-balanced communities, out-in-ratio transition matrices.
PopulationSpec random_spec(Index n, Index K, Index Q, std::uint64_t seed);

} // namespace basic

#endif // BASIC_POPULATION_HPP
