#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qamp/rng.hpp"

namespace qamp {

// Undirected simple graph, vertices 0..n_vertices-1.
struct Graph {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;
};

inline void validate_graph(const Graph& g) {
    if (g.n_vertices < 1) throw std::invalid_argument("graph: n_vertices must be >= 1");
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : g.edges) {
        if (u == v) throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(u));
        if (u < 0 || v < 0 || u >= g.n_vertices || v >= g.n_vertices)
            throw std::invalid_argument("graph: edge endpoint out of range");
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second)
            throw std::invalid_argument("graph: duplicate edge (" + std::to_string(u) + "," +
                                        std::to_string(v) + ")");
    }
}

inline std::vector<int> degrees(const Graph& g) {
    std::vector<int> d(g.n_vertices, 0);
    for (auto [u, v] : g.edges) {
        ++d[u];
        ++d[v];
    }
    return d;
}

inline bool is_connected(const Graph& g) {
    if (g.n_vertices <= 1) return true;
    std::vector<std::vector<int>> adj(g.n_vertices);
    for (auto [u, v] : g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<char> seen(g.n_vertices, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int w : adj[u])
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == g.n_vertices;
}

// Erdos-Renyi G(n, p), resampled until connected.
inline Graph random_connected_graph(int n, double edge_probability, RngStream& rng,
                                    int max_attempts = 1000) {
    if (n < 2) throw std::invalid_argument("random_connected_graph: n must be >= 2");
    if (edge_probability <= 0.0 || edge_probability > 1.0)
        throw std::invalid_argument("random_connected_graph: edge_probability must be in (0,1]");
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Graph g;
        g.n_vertices = n;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.bernoulli(edge_probability)) g.edges.emplace_back(u, v);
        if (is_connected(g)) return g;
    }
    throw std::runtime_error("random_connected_graph: no connected sample in " +
                             std::to_string(max_attempts) + " attempts (p too low for n)");
}

// Edge-list text format: first line n, one "u v" pair per following line.
inline Graph parse_edge_list(std::istream& in) {
    Graph g;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("edge list: empty input");
    g.n_vertices = std::stoi(line);
    while (std::getline(in, line)) {
        std::istringstream row(line);
        int u, v;
        if (!(row >> u >> v)) {
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            throw std::invalid_argument("edge list: bad line: " + line);
        }
        g.edges.emplace_back(u, v);
    }
    validate_graph(g);
    return g;
}

inline Graph parse_graph_json(const nlohmann::json& j) {
    Graph g;
    g.n_vertices = j.at("n").get<int>();
    for (const auto& e : j.at("edges")) g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    validate_graph(g);
    return g;
}

inline Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        nlohmann::json j;
        in >> j;
        return parse_graph_json(j);
    }
    return parse_edge_list(in);
}

inline nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (auto [u, v] : g.edges) edges.push_back({u, v});
    return {{"n", g.n_vertices}, {"edges", edges}};
}

} // namespace qamp
