#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qamp/graph.hpp"

namespace qamp {

// Vertex-cover QUBO in the {+1,-1} spin encoding, expanded form:
//   H = constant + sum_i linear[i]*x_i + sum_edges quadratic[e]*x_u*x_v
// with x_i = +1 when vertex i is in the cover.
struct QuboHamiltonian {
    double a_weight = 0.0;
    double b_weight = 0.0;
    double constant = 0.0;
    std::vector<double> linear;
    std::vector<std::pair<int, int>> edges;
    std::vector<double> quadratic; // aligned with edges
    int n_qubits = 0;
};

struct EnergyTable {
    std::vector<double> energies; // length 2^n, indexed by bitstring
    double e_inf = 0.0;
    double e_sup = 0.0;
    double ground_energy = 0.0;
    std::vector<std::uint64_t> ground_states;
    int n_qubits = 0;
};

enum class BoundsMode { exact, analytic };

inline constexpr int kBruteForceCap = 24;

// Basis convention: qubit i is bit i of the index; bit 0 <-> x = +1.
inline int spin_of(std::uint64_t index, int qubit) {
    return ((index >> qubit) & 1u) ? -1 : +1;
}

inline QuboHamiltonian build_vertex_cover_qubo(const Graph& g, double a_weight, double b_weight,
                                               double energy_shift = 0.0) {
    validate_graph(g);
    if (a_weight <= 0.0 || b_weight <= 0.0)
        throw std::invalid_argument("qubo: weights must be positive");
    if (b_weight <= a_weight)
        throw std::invalid_argument("qubo: penalty weight B must exceed A");
    QuboHamiltonian q;
    q.a_weight = a_weight;
    q.b_weight = b_weight;
    q.n_qubits = g.n_vertices;
    q.constant = b_weight * static_cast<double>(g.edges.size()) + energy_shift;
    auto deg = degrees(g);
    q.linear.resize(g.n_vertices);
    for (int i = 0; i < g.n_vertices; ++i) q.linear[i] = a_weight - b_weight * deg[i];
    q.edges = g.edges;
    q.quadratic.assign(g.edges.size(), b_weight);
    return q;
}

inline double energy_of(const QuboHamiltonian& q, std::uint64_t index) {
    if (q.n_qubits > 0 && (index >> q.n_qubits) != 0)
        throw std::invalid_argument("energy_of: bitstring wider than n_qubits");
    double e = q.constant;
    for (int i = 0; i < q.n_qubits; ++i) e += q.linear[i] * spin_of(index, i);
    for (std::size_t k = 0; k < q.edges.size(); ++k)
        e += q.quadratic[k] * spin_of(index, q.edges[k].first) * spin_of(index, q.edges[k].second);
    return e;
}

// Unexpanded objective A*sum(x) + B*sum((1-x_u)(1-x_v)); the cross-check route.
inline double energy_of_unexpanded(const QuboHamiltonian& q, std::uint64_t index,
                                   double energy_shift = 0.0) {
    double e = energy_shift;
    for (int i = 0; i < q.n_qubits; ++i) e += q.a_weight * spin_of(index, i);
    for (auto [u, v] : q.edges)
        e += q.b_weight * (1 - spin_of(index, u)) * (1 - spin_of(index, v));
    return e;
}

// `analytic` bounds: e_inf = A(2*k_min - n) when k_min is supplied, else the
// trivial -A*n; e_sup = A*n + 4*B*|E| from worst-case penalty counting.
// Ground states are enumerated in both modes.
inline EnergyTable build_energy_table(const QuboHamiltonian& q, BoundsMode mode,
                                      std::optional<int> k_min = std::nullopt,
                                      int brute_force_cap = kBruteForceCap) {
    if (q.n_qubits < 1 || q.n_qubits > brute_force_cap)
        throw std::invalid_argument("build_energy_table: n_qubits above brute-force cap");
    EnergyTable t;
    t.n_qubits = q.n_qubits;
    const std::uint64_t dim = std::uint64_t{1} << q.n_qubits;
    t.energies.resize(dim);
    for (std::uint64_t k = 0; k < dim; ++k) t.energies[k] = energy_of(q, k);
    double lo = t.energies[0], hi = t.energies[0];
    for (double e : t.energies) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    t.ground_energy = lo;
    for (std::uint64_t k = 0; k < dim; ++k)
        if (t.energies[k] == lo) t.ground_states.push_back(k);
    if (mode == BoundsMode::exact) {
        t.e_inf = lo;
        t.e_sup = hi;
    } else {
        const double n = q.n_qubits;
        t.e_inf = k_min ? q.a_weight * (2.0 * *k_min - n) : -q.a_weight * n;
        t.e_sup = q.a_weight * n + 4.0 * q.b_weight * static_cast<double>(q.edges.size());
        t.e_inf += q.constant - q.b_weight * static_cast<double>(q.edges.size());
        t.e_sup += q.constant - q.b_weight * static_cast<double>(q.edges.size());
    }
    return t;
}

// A bitstring decodes to a valid cover iff every edge has an included endpoint.
inline bool is_vertex_cover(const Graph& g, std::uint64_t index) {
    for (auto [u, v] : g.edges)
        if (spin_of(index, u) < 0 && spin_of(index, v) < 0) return false;
    return true;
}

} // namespace qamp
