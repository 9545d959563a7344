#ifndef BASIC_GRAPH_HPP
#define BASIC_GRAPH_HPP

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace basic {

using Index = std::int32_t;
using Edge = std::pair<Index, Index>;

/// Unweighted, undirected, simple graph. Edges are stored once as (i,j)
/// with i < j; adjacency lists are built at construction. Immutable.
class SymmetricAdjacency {
public:
    SymmetricAdjacency() = default;

    /// Edges are deduplicated and canonicalized; self-loops are rejected
    /// (callers that ingest raw files drop them beforehand).
    SymmetricAdjacency(Index n, std::vector<Edge> edges);

    Index node_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }

    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const Index> neighbors(Index i) const;
    Index degree(Index i) const;
    bool has_edge(Index i, Index j) const;

    Eigen::MatrixXd dense() const;

private:
    Index n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> adj_ptr_;
    std::vector<Index> adj_;
};

/// 0/1 bipartite incidence between n primary and m side nodes.
class BipartiteAdjacency {
public:
    BipartiteAdjacency() = default;
    BipartiteAdjacency(Index n, Index m, std::vector<Edge> edges);

    Index primary_count() const { return n_; }
    Index side_count() const { return m_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    Eigen::MatrixXd dense() const;

private:
    Index n_ = 0;
    Index m_ = 0;
    std::vector<Edge> edges_;
};

/// A restriction of a graph to a node subset, with the compacting remap.
struct NodeSubset {
    std::vector<Index> kept;   // strictly increasing original indices
    std::vector<Index> remap;  // original index -> compact index, -1 if dropped

    static NodeSubset of(std::vector<Index> kept_nodes, Index n);
    Index size() const { return static_cast<Index>(kept.size()); }
    bool contains(Index orig) const { return remap[orig] >= 0; }
};

struct EdgeListLoad {
    Index n = 0;
    Index m = 0;  // bipartite only
    std::vector<Edge> edges;
    long self_loops_dropped = 0;
    long duplicates_dropped = 0;
};

enum class GraphKind { Primary, Bipartite };

/// Reads a whitespace-separated edge list. '#' lines are comments except
/// a "#dims n [m]" header, which declares the node counts. Without a
/// header (or explicit n/m arguments) dimensions default to the largest
/// index seen. Indices in the file are 1-based unless zero_based.
EdgeListLoad load_edge_list(const std::string& path, GraphKind kind,
                            Index n = 0, Index m = 0, bool zero_based = false);

SymmetricAdjacency make_primary(const EdgeListLoad& load);
BipartiteAdjacency make_bipartite(const EdgeListLoad& load);

/// Writes the edge set in the same format load_edge_list reads,
/// including the "#dims" header. Round-trips the edge set exactly.
void save_edge_list(const std::string& path, const SymmetricAdjacency& a, bool zero_based = false);
void save_edge_list(const std::string& path, const BipartiteAdjacency& b, bool zero_based = false);

/// Maximal induced subgraph with all degrees >= c, by iterative peeling.
/// Result is order-independent; may be empty.
NodeSubset c_core(const SymmetricAdjacency& a, Index c);

/// Largest connected component; ties broken by smallest minimum
/// original index.
NodeSubset largest_connected_component(const SymmetricAdjacency& a);

/// |E| / C(n,2). Requires n >= 2.
double density(const SymmetricAdjacency& a);

SymmetricAdjacency restrict_to(const SymmetricAdjacency& a, const NodeSubset& s);

/// Keeps only the rows of b whose primary node survives in s; side nodes
/// are left untouched.
BipartiteAdjacency restrict_rows(const BipartiteAdjacency& b, const NodeSubset& s);

} // namespace basic

#endif // BASIC_GRAPH_HPP
