#include "basic/spectral.hpp"

#include "basic/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace basic {

Eigen::MatrixXd aggregate(const SymmetricAdjacency& a,
                          const std::vector<BipartiteAdjacency>& bs) {
    const Index n = a.node_count();
    for (const auto& b : bs)
        if (b.primary_count() != n)
            throw DomainError("bipartite primary dimension does not match the primary network");

    Eigen::MatrixXd ad = a.dense();
    Eigen::MatrixXd m = ad * ad;  // A symmetric, so A A^T = A^2
    for (const auto& b : bs) {
        Eigen::MatrixXd bd = b.dense();
        m.noalias() += bd * bd.transpose();
    }
    return m;
}

Eigen::VectorXd spectrum_abs_sorted(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
    Eigen::VectorXd vals = solver.eigenvalues();
    std::vector<Index> order(vals.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
        return std::abs(vals[i]) > std::abs(vals[j]);
    });
    Eigen::VectorXd out(vals.size());
    for (Index i = 0; i < vals.size(); ++i) out[i] = vals[order[i]];
    return out;
}

namespace {

void fix_leading_sign(EigenPack& pack) {
    if (pack.vectors.cols() > 0 && pack.vectors.col(0).sum() < 0.0)
        pack.vectors.col(0) = -pack.vectors.col(0);
}

EigenPack dense_top_k(const Eigen::MatrixXd& m, Index K) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
    const Eigen::VectorXd& vals = solver.eigenvalues();
    std::vector<Index> order(vals.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
        return std::abs(vals[i]) > std::abs(vals[j]);
    });

    EigenPack pack;
    pack.values.resize(K);
    pack.vectors.resize(m.rows(), K);
    for (Index k = 0; k < K; ++k) {
        pack.values[k] = vals[order[k]];
        pack.vectors.col(k) = solver.eigenvectors().col(order[k]);
    }
    fix_leading_sign(pack);
    return pack;
}

// Lanczos with full reorthogonalization. One matvec per step; Ritz pairs
// of largest absolute value are extracted once their residual estimates
// drop below tol * |theta|.
EigenPack lanczos_top_k(const Eigen::MatrixXd& m, Index K, const EigenOptions& opts) {
    const Index n = static_cast<Index>(m.rows());
    const int max_iter = opts.lanczos_max_iter_per_pair * static_cast<int>(K);

    Rng rng(0x6c616e637a6f73ULL);  // fixed internal seed: deterministic results
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = gauss(rng);
    v.normalize();

    Eigen::MatrixXd basis(n, std::min<int>(max_iter, n));
    std::vector<double> alpha, beta;
    basis.col(0) = v;

    Eigen::VectorXd w;
    int j = 0;
    for (; j < std::min<int>(max_iter, n); ++j) {
        w = m * basis.col(j);
        double a = basis.col(j).dot(w);
        alpha.push_back(a);
        w -= a * basis.col(j);
        if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
        // full reorthogonalization against the whole basis
        for (int pass = 0; pass < 2; ++pass)
            w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
        double b = w.norm();

        const int dim = j + 1;
        if (dim >= K) {
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
            for (int i = 0; i < dim; ++i) t(i, i) = alpha[i];
            for (int i = 0; i + 1 < dim; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ts(t);
            const Eigen::VectorXd& theta = ts.eigenvalues();
            std::vector<int> order(dim);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
                return std::abs(theta[x]) > std::abs(theta[y]);
            });
            bool converged = true;
            for (Index k = 0; k < K; ++k) {
                double resid = b * std::abs(ts.eigenvectors()(dim - 1, order[k]));
                if (resid > opts.lanczos_tol * std::max(std::abs(theta[order[k]]), 1.0)) {
                    converged = false;
                    break;
                }
            }
            if (converged || b <= 1e-14 || dim == n) {
                EigenPack pack;
                pack.values.resize(K);
                pack.vectors.resize(n, K);
                for (Index k = 0; k < K; ++k) {
                    pack.values[k] = theta[order[k]];
                    pack.vectors.col(k) = basis.leftCols(dim) * ts.eigenvectors().col(order[k]);
                    pack.vectors.col(k).normalize();
                }
                fix_leading_sign(pack);
                return pack;
            }
        }
        if (b <= 1e-14) {
            // invariant subspace hit before K pairs converged: restart
            // direction orthogonal to the current basis
            Eigen::VectorXd fresh(n);
            for (Index i = 0; i < n; ++i) fresh[i] = gauss(rng);
            fresh -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * fresh);
            b = fresh.norm();
            if (b <= 1e-14) throw NumericError("Lanczos: basis exhausted");
            w = fresh;
            beta.push_back(0.0);  // decoupled block in the tridiagonal
        } else {
            beta.push_back(b);
        }
        if (j + 1 < basis.cols()) basis.col(j + 1) = w / b;
    }
    throw NumericError("Lanczos did not converge after " + std::to_string(j) + " iterations");
}

} // namespace

EigenPack top_k_eigen(const Eigen::MatrixXd& m, Index K, const EigenOptions& opts) {
    const Index n = static_cast<Index>(m.rows());
    if (m.cols() != n) throw DomainError("matrix must be square");
    if (K < 1 || K > n) throw DomainError("K out of range");
    if (!m.isApprox(m.transpose(), 1e-10)) throw DomainError("matrix must be symmetric");

    EigenPack pack = (n <= opts.dense_limit) ? dense_top_k(m, K) : lanczos_top_k(m, K, opts);

    // residual contract: ||M v - lambda v|| <= 1e-8 ||M||_op per pair
    const double op_norm = std::abs(pack.values[0]);
    for (Index k = 0; k < K; ++k) {
        double resid = (m * pack.vectors.col(k) - pack.values[k] * pack.vectors.col(k)).norm();
        if (resid > 1e-8 * std::max(op_norm, 1.0))
            throw NumericError("eigenpair residual " + std::to_string(resid) + " exceeds tolerance");
    }
    return pack;
}

Eigen::MatrixXd score_ratio(const EigenPack& eig, double threshold) {
    const Index K = static_cast<Index>(eig.vectors.cols());
    if (K < 2) throw DomainError("SCORE ratios need K >= 2");
    if (threshold <= 0.0) throw DomainError("ratio clamp must be positive");

    const Index n = static_cast<Index>(eig.vectors.rows());
    Eigen::MatrixXd r(n, K - 1);
    for (Index i = 0; i < n; ++i) {
        const double lead = eig.vectors(i, 0);
        for (Index k = 1; k < K; ++k) {
            const double num = eig.vectors(i, k);
            const double sign = (num > 0.0) - (num < 0.0);
            double mag;
            if (lead == 0.0)
                mag = threshold;  // clamp engaged; sign from the numerator
            else
                mag = std::min(std::abs(num / lead), threshold);
            r(i, k - 1) = sign * mag;
        }
    }
    return r;
}

DetectResult basic_detect(const SymmetricAdjacency& a,
                          const std::vector<BipartiteAdjacency>& bs,
                          Index K, const DetectOptions& opts, Rng& rng) {
    if (K < 2) throw DomainError("community detection needs K >= 2");
    const Index n = a.node_count();
    if (K > n) throw DomainError("K exceeds node count");

    Eigen::MatrixXd m = aggregate(a, bs);
    EigenPack eig = top_k_eigen(m, K, opts.eigen);
    const double t_n = opts.threshold > 0.0 ? opts.threshold : std::log(static_cast<double>(n));
    Eigen::MatrixXd ratio = score_ratio(eig, t_n);

    KMeansOptions kopts = opts.kmeans;
    kopts.K = K;
    KMeansResult km = kmeans(ratio, kopts, rng);

    DetectResult out;
    out.labels = std::move(km.labels);
    out.eigenvalues = std::move(eig.values);
    out.ratio = std::move(ratio);
    out.kmeans_inertia = km.inertia;
    return out;
}

DetectResult score_detect(const SymmetricAdjacency& a, Index K,
                          const DetectOptions& opts, Rng& rng) {
    return basic_detect(a, {}, K, opts, rng);
}

} // namespace basic
