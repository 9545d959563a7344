#include "basic/graph.hpp"

#include "basic/errors.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>

namespace basic {

SymmetricAdjacency::SymmetricAdjacency(Index n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw DomainError("node count must be non-negative");
    edges_.reserve(edges.size());
    for (auto [i, j] : edges) {
        if (i == j) throw DomainError("self-loop in edge set");
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw DomainError("edge index out of range");
        edges_.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    std::vector<std::size_t> deg(static_cast<std::size_t>(n) + 1, 0);
    for (auto [i, j] : edges_) {
        ++deg[static_cast<std::size_t>(i) + 1];
        ++deg[static_cast<std::size_t>(j) + 1];
    }
    adj_ptr_.assign(deg.begin(), deg.end());
    std::partial_sum(adj_ptr_.begin(), adj_ptr_.end(), adj_ptr_.begin());
    adj_.resize(adj_ptr_.back());
    std::vector<std::size_t> cursor(adj_ptr_.begin(), adj_ptr_.end() - 1);
    for (auto [i, j] : edges_) {
        adj_[cursor[i]++] = j;
        adj_[cursor[j]++] = i;
    }
    for (Index v = 0; v < n; ++v)
        std::sort(adj_.begin() + static_cast<long>(adj_ptr_[v]),
                  adj_.begin() + static_cast<long>(adj_ptr_[v + 1]));
}

std::span<const Index> SymmetricAdjacency::neighbors(Index i) const {
    return {adj_.data() + adj_ptr_[i], adj_ptr_[i + 1] - adj_ptr_[i]};
}

Index SymmetricAdjacency::degree(Index i) const {
    return static_cast<Index>(adj_ptr_[i + 1] - adj_ptr_[i]);
}

bool SymmetricAdjacency::has_edge(Index i, Index j) const {
    auto nb = neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
}

Eigen::MatrixXd SymmetricAdjacency::dense() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    for (auto [i, j] : edges_) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
    }
    return a;
}

BipartiteAdjacency::BipartiteAdjacency(Index n, Index m, std::vector<Edge> edges)
    : n_(n), m_(m), edges_(std::move(edges)) {
    if (n < 0 || m < 0) throw DomainError("node counts must be non-negative");
    for (auto [i, j] : edges_)
        if (i < 0 || j < 0 || i >= n || j >= m)
            throw DomainError("bipartite edge index out of range");
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

Eigen::MatrixXd BipartiteAdjacency::dense() const {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n_, m_);
    for (auto [i, j] : edges_) b(i, j) = 1.0;
    return b;
}

NodeSubset NodeSubset::of(std::vector<Index> kept_nodes, Index n) {
    std::sort(kept_nodes.begin(), kept_nodes.end());
    NodeSubset s;
    s.kept = std::move(kept_nodes);
    s.remap.assign(n, -1);
    for (std::size_t c = 0; c < s.kept.size(); ++c) {
        Index orig = s.kept[c];
        if (orig < 0 || orig >= n) throw DomainError("subset index out of range");
        if (s.remap[orig] >= 0) throw DomainError("duplicate subset index");
        s.remap[orig] = static_cast<Index>(c);
    }
    return s;
}

EdgeListLoad load_edge_list(const std::string& path, GraphKind kind,
                            Index n, Index m, bool zero_based) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");

    EdgeListLoad out;
    out.n = n;
    out.m = m;
    const Index base = zero_based ? 0 : 1;
    Index max_i = -1, max_j = -1;
    bool dims_declared = (n > 0);

    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string tag;
            if (hs >> tag && tag == "dims") {
                Index dn = 0, dm = 0;
                if (!(hs >> dn)) throw ParseError("bad #dims header", lineno);
                hs >> dm;
                if (out.n == 0) out.n = dn;
                if (out.m == 0) out.m = dm;
                dims_declared = true;
            }
            continue;
        }
        std::istringstream ls(line);
        long long i = 0, j = 0;
        if (!(ls >> i >> j)) throw ParseError("expected two integers", lineno);
        std::string trailing;
        if (ls >> trailing) throw ParseError("trailing tokens", lineno);
        i -= base;
        j -= base;
        if (i < 0 || j < 0) throw ParseError("negative node index", lineno);
        if (dims_declared) {
            if (i >= out.n) throw ParseError("node index exceeds declared n", lineno);
            Index jlimit = (kind == GraphKind::Primary) ? out.n : out.m;
            if (j >= jlimit) throw ParseError("node index exceeds declared bound", lineno);
        }
        if (kind == GraphKind::Primary && i == j) {
            ++out.self_loops_dropped;
            continue;
        }
        Index ii = static_cast<Index>(i), jj = static_cast<Index>(j);
        if (kind == GraphKind::Primary && ii > jj) std::swap(ii, jj);
        max_i = std::max(max_i, ii);
        max_j = std::max(max_j, jj);
        out.edges.emplace_back(ii, jj);
    }

    if (out.n == 0) out.n = (kind == GraphKind::Primary ? std::max(max_i, max_j) : max_i) + 1;
    if (kind == GraphKind::Bipartite && out.m == 0) out.m = max_j + 1;

    std::sort(out.edges.begin(), out.edges.end());
    auto last = std::unique(out.edges.begin(), out.edges.end());
    out.duplicates_dropped = std::distance(last, out.edges.end());
    out.edges.erase(last, out.edges.end());
    return out;
}

SymmetricAdjacency make_primary(const EdgeListLoad& load) {
    return SymmetricAdjacency(load.n, load.edges);
}

BipartiteAdjacency make_bipartite(const EdgeListLoad& load) {
    return BipartiteAdjacency(load.n, load.m, load.edges);
}

namespace {

void write_edges(std::ofstream& out, const std::vector<Edge>& edges, Index base) {
    for (auto [i, j] : edges)
        out << (i + base) << ' ' << (j + base) << '\n';
}

} // namespace

void save_edge_list(const std::string& path, const SymmetricAdjacency& a, bool zero_based) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << "#dims " << a.node_count() << '\n';
    write_edges(out, a.edges(), zero_based ? 0 : 1);
}

void save_edge_list(const std::string& path, const BipartiteAdjacency& b, bool zero_based) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << "#dims " << b.primary_count() << ' ' << b.side_count() << '\n';
    write_edges(out, b.edges(), zero_based ? 0 : 1);
}

NodeSubset c_core(const SymmetricAdjacency& a, Index c) {
    if (c < 1) throw DomainError("core order must be >= 1");
    const Index n = a.node_count();
    std::vector<Index> deg(n);
    std::vector<char> removed(n, 0);
    std::queue<Index> pending;
    for (Index v = 0; v < n; ++v) {
        deg[v] = a.degree(v);
        if (deg[v] < c) {
            pending.push(v);
            removed[v] = 1;
        }
    }
    while (!pending.empty()) {
        Index v = pending.front();
        pending.pop();
        for (Index u : a.neighbors(v)) {
            if (removed[u]) continue;
            if (--deg[u] < c) {
                removed[u] = 1;
                pending.push(u);
            }
        }
    }
    std::vector<Index> kept;
    for (Index v = 0; v < n; ++v)
        if (!removed[v]) kept.push_back(v);
    return NodeSubset::of(std::move(kept), n);
}

NodeSubset largest_connected_component(const SymmetricAdjacency& a) {
    const Index n = a.node_count();
    if (n < 1) throw DomainError("empty graph");
    std::vector<Index> comp(n, -1);
    std::vector<Index> best;
    for (Index start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        std::vector<Index> members;
        std::queue<Index> q;
        q.push(start);
        comp[start] = start;
        while (!q.empty()) {
            Index v = q.front();
            q.pop();
            members.push_back(v);
            for (Index u : a.neighbors(v)) {
                if (comp[u] < 0) {
                    comp[u] = start;
                    q.push(u);
                }
            }
        }
        // Components are discovered in order of their minimum index, so a
        // strict size comparison implements the tie rule.
        if (members.size() > best.size()) best = std::move(members);
    }
    return NodeSubset::of(std::move(best), n);
}

double density(const SymmetricAdjacency& a) {
    const Index n = a.node_count();
    if (n < 2) throw DomainError("density needs at least 2 nodes");
    const double pairs = 0.5 * static_cast<double>(n) * (n - 1);
    return static_cast<double>(a.edge_count()) / pairs;
}

SymmetricAdjacency restrict_to(const SymmetricAdjacency& a, const NodeSubset& s) {
    if (static_cast<Index>(s.remap.size()) != a.node_count())
        throw DomainError("subset does not match graph");
    std::vector<Edge> kept;
    for (auto [i, j] : a.edges()) {
        Index ci = s.remap[i], cj = s.remap[j];
        if (ci >= 0 && cj >= 0) kept.emplace_back(ci, cj);
    }
    return SymmetricAdjacency(s.size(), std::move(kept));
}

BipartiteAdjacency restrict_rows(const BipartiteAdjacency& b, const NodeSubset& s) {
    if (static_cast<Index>(s.remap.size()) != b.primary_count())
        throw DomainError("subset does not match bipartite rows");
    std::vector<Edge> kept;
    for (auto [i, j] : b.edges()) {
        Index ci = s.remap[i];
        if (ci >= 0) kept.emplace_back(ci, j);
    }
    return BipartiteAdjacency(s.size(), b.side_count(), std::move(kept));
}

} // namespace basic
