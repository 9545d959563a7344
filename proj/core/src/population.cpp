#include "basic/population.hpp"

#include "basic/errors.hpp"
#include "basic/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace basic {

void PopulationSpec::validate() const {
    const Index nn = memb_t.n;
    if (theta.size() != nn) throw DomainError("theta length mismatch");
    if (theta.minCoeff() <= 0.0 || theta.maxCoeff() > 1.0)
        throw DomainError("theta entries must lie in (0,1]");
    if (E.rows() != memb_t.K || E.cols() != memb_t.K)
        throw DomainError("E dimension mismatch");
    if (!E.isApprox(E.transpose(), 1e-12)) throw DomainError("E must be symmetric");
    if (E.minCoeff() < 0.0 || E.maxCoeff() > 1.0) throw DomainError("E entries out of [0,1]");
    if (!Fs.empty()) {
        if (delta.size() != memb_s.n) throw DomainError("delta length mismatch");
        if (delta.minCoeff() <= 0.0 || delta.maxCoeff() > 1.0)
            throw DomainError("delta entries must lie in (0,1]");
        for (const auto& f : Fs) {
            if (f.rows() != memb_t.K || f.cols() != memb_s.K)
                throw DomainError("F dimension mismatch");
            if (f.minCoeff() < 0.0 || f.maxCoeff() > 1.0)
                throw DomainError("F entries out of [0,1]");
        }
    }
}

namespace {

double delta_norm(const PopulationSpec& spec) {
    // With no bipartite networks the ||delta||^2 factors cancel in the
    // reparameterization; unit norm keeps the formulas uniform.
    return spec.delta.size() > 0 ? spec.delta.norm() : 1.0;
}

Eigen::MatrixXd orthonormal_membership(const Eigen::VectorXd& weights, const Membership& memb) {
    Eigen::MatrixXd theta_memb = Eigen::MatrixXd::Zero(memb.n, memb.K);
    Eigen::VectorXd comm_norm2 = Eigen::VectorXd::Zero(memb.K);
    for (Index i = 0; i < memb.n; ++i)
        comm_norm2[memb.labels[i]] += weights[i] * weights[i];
    for (Index i = 0; i < memb.n; ++i)
        theta_memb(i, memb.labels[i]) = weights[i] / std::sqrt(comm_norm2[memb.labels[i]]);
    return theta_memb;
}

Eigen::VectorXd community_norms(const Eigen::VectorXd& weights, const Membership& memb) {
    Eigen::VectorXd norm2 = Eigen::VectorXd::Zero(memb.K);
    for (Index i = 0; i < memb.n; ++i) norm2[memb.labels[i]] += weights[i] * weights[i];
    return norm2.cwiseSqrt();
}

} // namespace

PopulationMeans population_means(const PopulationSpec& spec) {
    spec.validate();
    const Index n = spec.n();
    PopulationMeans out;
    out.omega0.resize(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            out.omega0(i, j) =
                spec.theta[i] * spec.theta[j] * spec.E(spec.memb_t.labels[i], spec.memb_t.labels[j]);
    out.omega0.diagonal().setZero();

    const Index m = spec.memb_s.n;
    for (const auto& f : spec.Fs) {
        Eigen::MatrixXd omega(n, m);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < m; ++j)
                omega(i, j) =
                    spec.theta[i] * spec.delta[j] * f(spec.memb_t.labels[i], spec.memb_s.labels[j]);
        out.omegas.push_back(std::move(omega));
    }
    return out;
}

PopulationDecomposition population_aggregate(const PopulationSpec& spec) {
    spec.validate();
    const Index K = spec.K();
    const double theta_norm = spec.theta.norm();
    const double dnorm = delta_norm(spec);

    PopulationDecomposition d;
    d.theta_memb = orthonormal_membership(spec.theta, spec.memb_t);
    d.psi_theta = community_norms(spec.theta, spec.memb_t) / theta_norm;
    if (spec.delta.size() > 0) {
        d.delta_memb = orthonormal_membership(spec.delta, spec.memb_s);
        d.psi_delta = community_norms(spec.delta, spec.memb_s) / dnorm;
    }

    const Eigen::MatrixXd s0 =
        d.psi_theta.asDiagonal() * spec.E * Eigen::MatrixXd(d.psi_theta.asDiagonal());
    d.sbar = (theta_norm * theta_norm) / (dnorm * dnorm) * s0 * s0.transpose();
    for (const auto& f : spec.Fs) {
        Eigen::MatrixXd sq = d.psi_theta.asDiagonal() * f * Eigen::MatrixXd(d.psi_delta.asDiagonal());
        d.sbar += sq * sq.transpose();
    }

    const double prefactor = theta_norm * theta_norm * dnorm * dnorm;
    d.omega_m = prefactor * d.theta_memb * d.sbar * d.theta_memb.transpose();

    // cross-check: Gram sum of the factored (full-diagonal) means
    {
        const Eigen::MatrixXd omega0_full =
            theta_norm * theta_norm * d.theta_memb * s0 * d.theta_memb.transpose();
        Eigen::MatrixXd gram = omega0_full * omega0_full.transpose();
        PopulationMeans means = population_means(spec);
        for (const auto& omega : means.omegas) gram.noalias() += omega * omega.transpose();
        const double scale = std::max(d.omega_m.norm(), 1e-300);
        d.gram_vs_factored = (gram - d.omega_m).norm() / scale;

        Eigen::MatrixXd gram_zero_diag = means.omega0 * means.omega0.transpose();
        for (const auto& omega : means.omegas) gram_zero_diag.noalias() += omega * omega.transpose();
        d.diagonal_discrepancy = (gram_zero_diag - d.omega_m).norm() / scale;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(d.sbar);
    if (solver.info() != Eigen::Success) throw NumericError("sbar eigendecomposition failed");
    std::vector<Index> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
        return std::abs(solver.eigenvalues()[i]) > std::abs(solver.eigenvalues()[j]);
    });
    d.sigma.resize(K);
    d.J.resize(K, K);
    for (Index k = 0; k < K; ++k) {
        d.sigma[k] = solver.eigenvalues()[order[k]];
        d.J.col(k) = solver.eigenvectors().col(order[k]);
    }
    // Perron convention for the leading eigenvector of sbar
    if (d.J.col(0).sum() < 0.0) d.J.col(0) = -d.J.col(0);

    d.U = d.theta_memb * d.J;
    d.lambdas = prefactor * d.sigma;
    d.rank_warning = std::abs(d.sigma[K - 1]) <= 1e-12 * std::max(std::abs(d.sigma[0]), 1e-300);
    return d;
}

Proposition1Report check_proposition1(const PopulationSpec& spec,
                                      const PopulationDecomposition& decomp) {
    const Index n = spec.n();
    const Index K = spec.K();
    Proposition1Report report;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(decomp.omega_m);
    if (solver.info() != Eigen::Success) throw NumericError("omega_m eigendecomposition failed");
    Eigen::VectorXd vals = solver.eigenvalues();
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
        return std::abs(vals[i]) > std::abs(vals[j]);
    });

    const double scale = std::max(std::abs(decomp.lambdas[0]), 1e-300);

    // (a) eigenvalue formula: top-K match, the rest vanish
    for (Index k = 0; k < K; ++k)
        report.eigenvalue_dev =
            std::max(report.eigenvalue_dev, std::abs(vals[order[k]] - decomp.lambdas[k]) / scale);
    for (Index k = K; k < n; ++k)
        report.eigenvalue_dev = std::max(report.eigenvalue_dev, std::abs(vals[order[k]]) / scale);

    Eigen::MatrixXd u_direct(n, K);
    for (Index k = 0; k < K; ++k) u_direct.col(k) = solver.eigenvectors().col(order[k]);

    // (b) row formula U = Theta_theta J, up to per-column sign; subspace
    // projection distance inside multiplicity blocks
    Index k = 0;
    while (k < K) {
        Index j = k + 1;
        while (j < K &&
               std::abs(decomp.sigma[j] - decomp.sigma[k]) <
                   1e-8 * std::max(std::abs(decomp.sigma[0]), 1e-300))
            ++j;
        if (j - k == 1) {
            Eigen::VectorXd pred = decomp.U.col(k);
            Eigen::VectorXd got = u_direct.col(k);
            if (pred.dot(got) < 0.0) got = -got;
            report.row_dev = std::max(report.row_dev, (pred - got).lpNorm<Eigen::Infinity>());
        } else {
            report.subspace_fallback = true;
            const auto block_pred = decomp.U.middleCols(k, j - k);
            const auto block_got = u_direct.middleCols(k, j - k);
            Eigen::MatrixXd diff = block_pred * block_pred.transpose() -
                                   block_got * block_got.transpose();
            report.row_dev = std::max(report.row_dev, diff.norm());
        }
        k = j;
    }

    // (c) row norms against theta_i / ||theta^(l_i)||
    Eigen::VectorXd comm_norm = community_norms(spec.theta, spec.memb_t);
    for (Index i = 0; i < n; ++i) {
        const double expected = spec.theta[i] / comm_norm[spec.memb_t.labels[i]];
        report.row_norm_dev =
            std::max(report.row_norm_dev, std::abs(u_direct.row(i).norm() - expected));
    }
    return report;
}

Eigen::MatrixXd population_ratio(const PopulationDecomposition& decomp) {
    EigenPack pack;
    pack.values = decomp.lambdas;
    pack.vectors = decomp.U;
    if (pack.vectors.col(0).sum() < 0.0) pack.vectors.col(0) = -pack.vectors.col(0);
    const double t_n = std::log(static_cast<double>(decomp.U.rows()));
    return score_ratio(pack, t_n);
}

SeparationReport ratio_separation(const Eigen::MatrixXd& ratio, const Labels& labels) {
    if (static_cast<std::size_t>(ratio.rows()) != labels.size())
        throw DomainError("label length mismatch");
    const Index K = *std::max_element(labels.begin(), labels.end()) + 1;

    // within-community spread against the first representative of each
    // community; cross distances between representatives
    std::vector<Index> rep(K, -1);
    SeparationReport report;
    report.min_between = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < ratio.rows(); ++i) {
        Index l = labels[i];
        if (rep[l] < 0) rep[l] = i;
        report.max_within_spread = std::max(
            report.max_within_spread, (ratio.row(i) - ratio.row(rep[l])).norm());
    }
    for (Index a = 0; a < K; ++a)
        for (Index b = a + 1; b < K; ++b)
            if (rep[a] >= 0 && rep[b] >= 0)
                report.min_between =
                    std::min(report.min_between, (ratio.row(rep[a]) - ratio.row(rep[b])).norm());
    if (!std::isfinite(report.min_between)) report.min_between = 0.0;
    return report;
}

DeviationReport deviation_check(const SymmetricAdjacency& a,
                                const std::vector<BipartiteAdjacency>& bs,
                                const PopulationSpec& spec) {
    spec.validate();
    PopulationDecomposition decomp = population_aggregate(spec);
    Eigen::MatrixXd m = aggregate(a, bs);
    Eigen::MatrixXd diff = m - decomp.omega_m;

    DeviationReport report;
    report.lhs = spectrum_abs_sorted(diff).cwiseAbs().maxCoeff();

    double max_signal = std::abs(spectrum_abs_sorted(spec.E)[0]);
    for (const auto& f : spec.Fs) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(f);
        max_signal = std::max(max_signal, svd.singularValues()[0]);
    }
    const double n = static_cast<double>(spec.n());
    const double theta_max = spec.theta.maxCoeff();
    const double delta_max = spec.delta.size() > 0 ? spec.delta.maxCoeff() : 0.0;
    const double z = std::max(theta_max, delta_max) *
                     std::max(spec.theta.lpNorm<1>(),
                              spec.delta.size() > 0 ? spec.delta.lpNorm<1>() : 0.0);
    report.rhs = spec.theta.norm() * delta_norm(spec) * std::sqrt(std::log(n) * z) * max_signal;
    report.ratio = report.rhs > 0.0 ? report.lhs / report.rhs : (report.lhs > 0.0 ? 1e300 : 0.0);
    return report;
}

DeviationSummary deviation_mc(const PopulationSpec& spec, int draws, std::uint64_t seed) {
    if (draws < 1) throw DomainError("draws must be >= 1");
    PopulationMeans means = population_means(spec);
    DeviationSummary summary;
    for (int d = 0; d < draws; ++d) {
        Rng rng = substream(seed, {static_cast<std::uint64_t>(d)});
        SymmetricAdjacency a = sample_symmetric(means.omega0, rng);
        std::vector<BipartiteAdjacency> bs;
        for (const auto& omega : means.omegas) bs.push_back(sample_bipartite(omega, rng));
        DeviationReport r = deviation_check(a, bs, spec);
        summary.max_ratio = std::max(summary.max_ratio, r.ratio);
        summary.mean_ratio += r.ratio / draws;
    }
    return summary;
}

double snr_primary(const Eigen::MatrixXd& E) {
    if (!E.isApprox(E.transpose(), 1e-12)) throw DomainError("E must be symmetric");
    Eigen::VectorXd vals = spectrum_abs_sorted(E);
    const double lmax = std::abs(vals[0]);
    if (lmax == 0.0) throw DomainError("zero transition matrix");
    const double lmin = std::abs(vals[vals.size() - 1]);
    return lmin * lmin / lmax;
}

double snr_basic(const Eigen::MatrixXd& E, const std::vector<Eigen::MatrixXd>& Fs) {
    if (!E.isApprox(E.transpose(), 1e-12)) throw DomainError("E must be symmetric");
    Eigen::VectorXd evals = spectrum_abs_sorted(E);
    double denom = std::abs(evals[0]);
    double numer = evals[evals.size() - 1] * evals[evals.size() - 1];
    for (const auto& f : Fs) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(f);
        const auto& sv = svd.singularValues();
        denom = std::max(denom, sv[0]);
        numer += sv[sv.size() - 1] * sv[sv.size() - 1];
    }
    if (denom == 0.0) throw DomainError("all transition matrices are zero");
    return numer / denom;
}

double eigengap_ratio(const Eigen::VectorXd& values, Index K) {
    if (K < 1 || values.size() < K + 1) throw DomainError("need at least K+1 eigenvalues");
    if (values[K - 1] == 0.0) throw DomainError("lambda_K is zero");
    return 1.0 - values[K] / values[K - 1];
}

double signal_scale(const PopulationSpec& spec) {
    const double n = static_cast<double>(spec.n());
    const double theta_max = spec.theta.maxCoeff();
    const double delta_max = spec.delta.size() > 0 ? spec.delta.maxCoeff() : 0.0;
    const double z = std::max(theta_max, delta_max) *
                     std::max(spec.theta.lpNorm<1>(),
                              spec.delta.size() > 0 ? spec.delta.lpNorm<1>() : 0.0);
    return std::sqrt(std::log(n) * z) / (spec.theta.norm() * delta_norm(spec));
}

PopulationSpec random_spec(Index n, Index K, Index Q, std::uint64_t seed) {
    if (n < 2 * K) throw DomainError("spec too small for K communities");
    Rng rng = substream(seed, {0xbeef});
    PopulationSpec spec;
    spec.theta = power_law_degrees(n, rng);

    // near-balanced random community sizes, every community non-empty
    std::vector<Index> sizes(K, 1);
    std::uniform_int_distribution<Index> pick(0, K - 1);
    for (Index left = n - K; left > 0; --left) ++sizes[pick(rng)];
    spec.memb_t = sequential_membership(sizes);

    std::uniform_real_distribution<double> beta_dist(0.05, 0.85);
    spec.E = out_in_transition(beta_dist(rng), K);

    if (Q > 0) {
        const Index m = std::max<Index>(2 * K, n / 2);
        spec.delta = power_law_degrees(m, rng);
        std::vector<Index> ssizes(K, 1);
        for (Index left = m - K; left > 0; --left) ++ssizes[pick(rng)];
        spec.memb_s = sequential_membership(ssizes);
        for (Index q = 0; q < Q; ++q)
            spec.Fs.push_back(out_in_transition(beta_dist(rng), K));
    } else {
        spec.memb_s = sequential_membership({1});
    }
    spec.validate();
    return spec;
}

} // namespace basic
