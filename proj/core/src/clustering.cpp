#include "basic/clustering.hpp"

#include "basic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace basic {

namespace {

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& points, Index K, Rng& rng) {
    const Index n = static_cast<Index>(points.rows());
    Eigen::MatrixXd centers(K, points.cols());
    std::uniform_int_distribution<Index> first(0, n - 1);
    centers.row(0) = points.row(first(rng));

    Eigen::VectorXd d2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Index k = 1; k < K; ++k) {
        double total = d2.sum();
        Index pick = 0;
        if (total > 0.0) {
            double target = unif(rng) * total, acc = 0.0;
            for (Index i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = first(rng);
        }
        centers.row(k) = points.row(pick);
        d2 = d2.cwiseMin((points.rowwise() - centers.row(k)).rowwise().squaredNorm());
    }
    return centers;
}

struct LloydOutcome {
    Labels labels;
    Eigen::MatrixXd centers;
    double inertia;
};

LloydOutcome lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centers,
                   int max_iter, double tol) {
    const Index n = static_cast<Index>(points.rows());
    const Index K = static_cast<Index>(centers.rows());
    Labels labels(n, 0);
    double prev_inertia = std::numeric_limits<double>::infinity();
    double inertia = prev_inertia;

    for (int iter = 0; iter < max_iter; ++iter) {
        inertia = 0.0;
        std::vector<Index> counts(K, 0);
        for (Index i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            Index arg = 0;
            for (Index k = 0; k < K; ++k) {
                double d = (points.row(i) - centers.row(k)).squaredNorm();
                if (d < best) {
                    best = d;
                    arg = k;
                }
            }
            labels[i] = arg;
            inertia += best;
            ++counts[arg];
        }

        // empty-cluster repair: move the center to the point farthest
        // from its current assignment
        for (Index k = 0; k < K; ++k) {
            if (counts[k] > 0) continue;
            Index far = 0;
            double far_d = -1.0;
            for (Index i = 0; i < n; ++i) {
                double d = (points.row(i) - centers.row(labels[i])).squaredNorm();
                if (d > far_d && counts[labels[i]] > 1) {
                    far_d = d;
                    far = i;
                }
            }
            if (far_d > 0.0) {
                --counts[labels[far]];
                labels[far] = k;
                counts[k] = 1;
                centers.row(k) = points.row(far);
            }
        }

        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(K, points.cols());
        std::vector<Index> sz(K, 0);
        for (Index i = 0; i < n; ++i) {
            next.row(labels[i]) += points.row(i);
            ++sz[labels[i]];
        }
        for (Index k = 0; k < K; ++k)
            if (sz[k] > 0) next.row(k) /= static_cast<double>(sz[k]);
            else next.row(k) = centers.row(k);

        double shift = (next - centers).rowwise().norm().maxCoeff();
        centers = std::move(next);
        if (shift <= tol || std::abs(prev_inertia - inertia) <= tol) break;
        prev_inertia = inertia;
    }

    // final assignment against the converged centers, so the stored
    // inertia matches the stored labels/centers exactly
    inertia = 0.0;
    for (Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        Index arg = 0;
        for (Index k = 0; k < K; ++k) {
            double d = (points.row(i) - centers.row(k)).squaredNorm();
            if (d < best) {
                best = d;
                arg = k;
            }
        }
        labels[i] = arg;
        inertia += best;
    }
    return {std::move(labels), std::move(centers), inertia};
}

} // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& opts, Rng& rng) {
    const Index n = static_cast<Index>(points.rows());
    if (opts.K < 1 || opts.max_iter < 1 || opts.n_init < 1) throw DomainError("invalid k-means options");
    if (n < opts.K) throw DomainError("fewer points than clusters");

    if (opts.initial_centers.size() > 0) {
        if (opts.initial_centers.rows() != opts.K || opts.initial_centers.cols() != points.cols())
            throw DomainError("initial centers dimension mismatch");
        auto out = lloyd(points, opts.initial_centers, opts.max_iter, opts.tol);
        return {std::move(out.labels), std::move(out.centers), out.inertia};
    }

    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < opts.n_init; ++r) {
        auto out = lloyd(points, kmeanspp_init(points, opts.K, rng), opts.max_iter, opts.tol);
        if (out.inertia < best.inertia) {
            best.labels = std::move(out.labels);
            best.centers = std::move(out.centers);
            best.inertia = out.inertia;
        }
    }
    return best;
}

double ari(const Labels& a, const Labels& b) {
    if (a.size() != b.size()) throw DomainError("labelings differ in length");
    const auto n = static_cast<long long>(a.size());
    if (n == 0) throw DomainError("empty labelings");

    std::map<std::pair<Index, Index>, long long> joint;
    std::map<Index, long long> ra, rb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++joint[{a[i], b[i]}];
        ++ra[a[i]];
        ++rb[b[i]];
    }
    auto choose2 = [](long long c) { return 0.5 * static_cast<double>(c) * (c - 1); };

    double sum_joint = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, c] : joint) sum_joint += choose2(c);
    for (const auto& [key, c] : ra) sum_a += choose2(c);
    for (const auto& [key, c] : rb) sum_b += choose2(c);

    const double total = choose2(n);
    const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
    const double maximum = 0.5 * (sum_a + sum_b);
    const double denom = maximum - expected;
    if (denom == 0.0) return 1.0;  // both partitions trivial and equal
    return (sum_joint - expected) / denom;
}

} // namespace basic
