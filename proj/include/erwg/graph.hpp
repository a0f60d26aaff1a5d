#pragma once

// Interaction graph and memory matrix.
//
// Vertices are 1-based. A directed edge (u,v) means v reads u's step history,
// i.e. u is an in-neighbour of v. The memory matrix is
//     b_{i,j} = (2 p_j - 1) / d_j_in   if (i,j) is an edge, else 0,
// so column j's absolute sum equals |2 p_j - 1| <= 1 and every eigenvalue of
// B lies in the closed unit disk.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "erwg/errors.hpp"

namespace erwg {

class DirectedGraph {
  public:
    // edges use 1-based vertex labels; duplicates rejected, self-loops allowed.
    DirectedGraph(int k, std::vector<std::pair<int, int>> edges);

    int k() const { return k_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    // 0-based accessors used by the simulator's inner loops.
    const std::vector<int>& in_neighbours(int v) const { return in_[v]; }
    int in_degree(int v) const { return static_cast<int>(in_[v].size()); }
    bool strongly_connected() const;

  private:
    int k_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> in_; // in_[v] = 0-based in-neighbour list of v
};

struct WalkConfig {
    DirectedGraph graph;
    std::vector<double> p; // memory parameters, one per vertex
    std::vector<double> q; // P(first step = +1), one per vertex

    WalkConfig(DirectedGraph g, std::vector<double> p_in, std::vector<double> q_in);
    int k() const { return graph.k(); }
};

DirectedGraph build_graph(int k, std::vector<std::pair<int, int>> edges);

// Dense B with both invariants (column sums, unit-disk spectrum) asserted.
Eigen::MatrixXd memory_matrix(const WalkConfig& config);

// The canonical two-walker configuration: V={1,2}, edges {(1,2),(2,1)},
// common memory p, initial probabilities (q1,q2).
WalkConfig two_elephant_config(double p, double q1, double q2);

// JSON round-trip, schema {"k": int, "edges": [[u,v],...], "p": [...], "q": [...]}.
WalkConfig config_from_json(const std::string& text);
std::string config_to_json(const WalkConfig& config);
WalkConfig load_config(const std::string& path);

// FNV-1a over the canonical serialization; recorded in run metadata.
std::uint64_t config_hash(const WalkConfig& config);

} // namespace erwg
