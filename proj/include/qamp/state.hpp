#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qamp/qubo.hpp"
#include "qamp/rng.hpp"

namespace qamp {

using cdouble = std::complex<double>;

inline constexpr double kDeadBranchTol = 1e-15;

struct NoiseSpec {
    double depolarizing_1q = 0.0; // per single-qubit gate
    double depolarizing_2q = 0.0; // per controlled operation, per touched qubit
    double readout_flip = 0.0;
    bool protect_ancilla = false;
};

inline void validate_noise(const NoiseSpec& n) {
    for (double p : {n.depolarizing_1q, n.depolarizing_2q, n.readout_flip})
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("noise: probability outside [0,1]");
}

// Joint (ancilla x n-qubit system) pure state as two system-sized branches:
// branch0 holds amplitudes coupled to ancilla |0>, branch1 to ancilla |1>.
struct AncillaBranchState {
    std::vector<cdouble> branch0;
    std::vector<cdouble> branch1;
    int n_qubits = 0;

    std::uint64_t dim() const { return std::uint64_t{1} << n_qubits; }

    double norm2() const {
        double s = 0.0;
        for (const auto& a : branch0) s += std::norm(a);
        for (const auto& a : branch1) s += std::norm(a);
        return s;
    }

    // Marginal probability of system basis state k (ancilla traced out).
    double system_prob(std::uint64_t k) const {
        return std::norm(branch0[k]) + std::norm(branch1[k]);
    }
};

// |+>^n on the system, ancilla |0>.
inline AncillaBranchState init_plus_state(int n, int cap = kBruteForceCap) {
    if (n < 1 || n > cap) throw std::invalid_argument("init_plus_state: n out of range");
    AncillaBranchState s;
    s.n_qubits = n;
    const std::uint64_t dim = std::uint64_t{1} << n;
    s.branch0.assign(dim, cdouble(std::pow(2.0, -0.5 * n), 0.0));
    s.branch1.assign(dim, cdouble(0.0, 0.0));
    return s;
}

inline void ancilla_hadamard(AncillaBranchState& s) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::uint64_t k = 0; k < s.dim(); ++k) {
        const cdouble a = s.branch0[k], b = s.branch1[k];
        s.branch0[k] = (a + b) * inv_sqrt2;
        s.branch1[k] = (a - b) * inv_sqrt2;
    }
}

// Relative phase e^{i theta} between the ancilla branches.
inline void ancilla_rz(AncillaBranchState& s, double theta) {
    const cdouble phase = std::polar(1.0, theta);
    for (auto& a : s.branch1) a *= phase;
}

// Ancilla-controlled e^{-iHt} for diagonal H: phases branch1 only.
inline void controlled_phase_evolution(AncillaBranchState& s, const EnergyTable& table, double t) {
    if (table.energies.size() != s.dim())
        throw std::invalid_argument("controlled_phase_evolution: table size mismatch");
    for (std::uint64_t k = 0; k < s.dim(); ++k)
        s.branch1[k] *= std::polar(1.0, -table.energies[k] * t);
}

// R_x(angle) = cos(angle/2) I - i sin(angle/2) X on one system qubit of one branch.
inline void rx_on_qubit(std::vector<cdouble>& branch, int qubit, double angle) {
    const double c = std::cos(0.5 * angle), sn = std::sin(0.5 * angle);
    const cdouble mis(0.0, -sn);
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    const std::uint64_t dim = branch.size();
    for (std::uint64_t k = 0; k < dim; ++k) {
        if (k & bit) continue;
        const cdouble a = branch[k], b = branch[k | bit];
        branch[k] = c * a + mis * b;
        branch[k | bit] = mis * a + c * b;
    }
}

inline void mixer_rx_all(AncillaBranchState& s, double angle) {
    for (int q = 0; q < s.n_qubits; ++q) {
        rx_on_qubit(s.branch0, q, angle);
        rx_on_qubit(s.branch1, q, angle);
    }
}

enum class Pauli { X, Y, Z };

inline void pauli_on_qubit(std::vector<cdouble>& branch, int qubit, Pauli p) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    const std::uint64_t dim = branch.size();
    for (std::uint64_t k = 0; k < dim; ++k) {
        if (k & bit) {
            if (p == Pauli::Z) branch[k] = -branch[k];
            continue;
        }
        if (p == Pauli::Z) continue;
        cdouble& a = branch[k];
        cdouble& b = branch[k | bit];
        if (p == Pauli::X) {
            std::swap(a, b);
        } else { // Y = [[0,-i],[i,0]]
            const cdouble a0 = a;
            a = cdouble(0.0, -1.0) * b;
            b = cdouble(0.0, 1.0) * a0;
        }
    }
}

inline void pauli_on_ancilla(AncillaBranchState& s, Pauli p) {
    switch (p) {
    case Pauli::X:
        std::swap(s.branch0, s.branch1);
        break;
    case Pauli::Y:
        std::swap(s.branch0, s.branch1);
        for (auto& a : s.branch0) a *= cdouble(0.0, -1.0);
        for (auto& a : s.branch1) a *= cdouble(0.0, 1.0);
        break;
    case Pauli::Z:
        for (auto& a : s.branch1) a = -a;
        break;
    }
}

inline constexpr int kAncillaSite = -1;

// Trajectory unraveling of depolarizing noise: with probability `prob`,
// apply a uniformly random Pauli at the site. Ancilla-site noise is skipped
// entirely under protect_ancilla.
inline void apply_noise_channel(AncillaBranchState& s, int site, RngStream& rng,
                                const NoiseSpec& noise, double prob) {
    if (prob <= 0.0) return;
    if (site == kAncillaSite && noise.protect_ancilla) return;
    if (!rng.bernoulli(prob)) return;
    const Pauli p = static_cast<Pauli>(rng.below(3));
    if (site == kAncillaSite) {
        pauli_on_ancilla(s, p);
    } else {
        pauli_on_qubit(s.branch0, site, p);
        pauli_on_qubit(s.branch1, site, p);
    }
}

struct MeasureResult {
    int outcome = 0;          // reported outcome (after any readout flip)
    int true_outcome = 0;     // physical outcome that drove the collapse
    double p0 = 0.0;          // Born probability of ancilla |0> before collapse
};

// Born-rule ancilla measurement with collapse and reset to |0>.
inline MeasureResult measure_ancilla(AncillaBranchState& s, RngStream& rng,
                                     const NoiseSpec& noise = {}) {
    double n0 = 0.0, n1 = 0.0;
    for (const auto& a : s.branch0) n0 += std::norm(a);
    for (const auto& a : s.branch1) n1 += std::norm(a);
    if (n0 < kDeadBranchTol && n1 < kDeadBranchTol)
        throw std::runtime_error("measure_ancilla: degenerate state, both branches dead");
    MeasureResult r;
    r.p0 = n0 / (n0 + n1);
    r.true_outcome = rng.bernoulli(r.p0) ? 0 : 1;
    if (r.true_outcome == 1 && n1 < kDeadBranchTol) r.true_outcome = 0;
    if (r.true_outcome == 0 && n0 < kDeadBranchTol) r.true_outcome = 1;
    if (r.true_outcome == 0) {
        const double inv = 1.0 / std::sqrt(n0);
        for (auto& a : s.branch0) a *= inv;
    } else {
        const double inv = 1.0 / std::sqrt(n1);
        s.branch0 = s.branch1;
        for (auto& a : s.branch0) a *= inv;
    }
    std::fill(s.branch1.begin(), s.branch1.end(), cdouble(0.0, 0.0));
    r.outcome = r.true_outcome;
    if (!noise.protect_ancilla && rng.bernoulli(noise.readout_flip)) r.outcome ^= 1;
    return r;
}

// Sample a system basis state from the marginal distribution.
inline std::uint64_t sample_system(const AncillaBranchState& s, RngStream& rng) {
    const double total = s.norm2();
    double u = rng.uniform() * total;
    const std::uint64_t dim = s.dim();
    for (std::uint64_t k = 0; k < dim; ++k) {
        u -= s.system_prob(k);
        if (u <= 0.0) return k;
    }
    return dim - 1;
}

} // namespace qamp
