#include "erwg/graph.hpp"

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace erwg {

DirectedGraph::DirectedGraph(int k, std::vector<std::pair<int, int>> edges)
    : k_(k), edges_(std::move(edges)), in_(static_cast<size_t>(std::max(k, 0))) {
    if (k_ < 1) throw InvalidConfig("vertex count must be >= 1");
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v] : edges_) {
        if (u < 1 || u > k_ || v < 1 || v > k_)
            throw InvalidConfig("edge endpoint outside 1..k");
        if (!seen.insert({u, v}).second) throw DuplicateEdge(u, v);
        in_[static_cast<size_t>(v - 1)].push_back(u - 1);
    }
    for (int v = 0; v < k_; ++v) {
        if (in_[static_cast<size_t>(v)].empty()) throw ZeroInDegree(v + 1);
        std::sort(in_[static_cast<size_t>(v)].begin(), in_[static_cast<size_t>(v)].end());
    }
}

bool DirectedGraph::strongly_connected() const {
    // Reachability both ways from vertex 0 (forward needs out-lists; derive them).
    std::vector<std::vector<int>> out(static_cast<size_t>(k_));
    for (const auto& [u, v] : edges_) out[static_cast<size_t>(u - 1)].push_back(v - 1);
    auto reach = [&](const std::vector<std::vector<int>>& adj) {
        std::vector<char> seen(static_cast<size_t>(k_), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[static_cast<size_t>(v)])
                if (!seen[static_cast<size_t>(w)]) {
                    seen[static_cast<size_t>(w)] = 1;
                    stack.push_back(w);
                }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    return reach(out) && reach(in_);
}

WalkConfig::WalkConfig(DirectedGraph g, std::vector<double> p_in, std::vector<double> q_in)
    : graph(std::move(g)), p(std::move(p_in)), q(std::move(q_in)) {
    const size_t k = static_cast<size_t>(graph.k());
    if (p.size() != k || q.size() != k)
        throw InvalidConfig("p and q must have one entry per vertex");
    for (double x : p)
        if (!(x >= 0.0 && x <= 1.0)) throw InvalidConfig("memory parameter outside [0,1]");
    for (double x : q)
        if (!(x >= 0.0 && x <= 1.0)) throw InvalidConfig("initial probability outside [0,1]");
}

DirectedGraph build_graph(int k, std::vector<std::pair<int, int>> edges) {
    return DirectedGraph(k, std::move(edges));
}

Eigen::MatrixXd memory_matrix(const WalkConfig& config) {
    const int k = config.k();
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < k; ++j) {
        const double w = (2.0 * config.p[static_cast<size_t>(j)] - 1.0) /
                         static_cast<double>(config.graph.in_degree(j));
        for (int i : config.graph.in_neighbours(j)) B(i, j) = w;
    }
    // Invariants from the construction; cheap to assert, catastrophic to violate.
    for (int j = 0; j < k; ++j) {
        const double colsum = B.col(j).cwiseAbs().sum();
        const double expected = std::abs(2.0 * config.p[static_cast<size_t>(j)] - 1.0);
        if (std::abs(colsum - expected) > 1e-12 || colsum > 1.0 + 1e-12)
            throw InvalidConfig("memory matrix column-sum invariant violated");
    }
    const auto eigenvalues = Eigen::EigenSolver<Eigen::MatrixXd>(B, false).eigenvalues();
    for (int j = 0; j < k; ++j)
        if (std::abs(eigenvalues(j)) > 1.0 + 1e-9)
            throw InvalidConfig("memory matrix has an eigenvalue outside the unit disk");
    return B;
}

WalkConfig two_elephant_config(double p, double q1, double q2) {
    return WalkConfig(build_graph(2, {{1, 2}, {2, 1}}), {p, p}, {q1, q2});
}

WalkConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        const int k = j.at("k").get<int>();
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : j.at("edges"))
            edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        return WalkConfig(build_graph(k, std::move(edges)),
                          j.at("p").get<std::vector<double>>(),
                          j.at("q").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(std::string("config shape is wrong: ") + e.what());
    }
}

std::string config_to_json(const WalkConfig& config) {
    nlohmann::json j;
    j["k"] = config.k();
    auto edges = nlohmann::json::array();
    for (const auto& [u, v] : config.graph.edges()) edges.push_back({u, v});
    j["edges"] = edges;
    j["p"] = config.p;
    j["q"] = config.q;
    return j.dump();
}

WalkConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return config_from_json(buffer.str());
}

std::uint64_t config_hash(const WalkConfig& config) {
    const std::string text = config_to_json(config);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace erwg
