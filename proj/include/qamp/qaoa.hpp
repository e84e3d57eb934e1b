#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qamp/amplifier.hpp"
#include "qamp/qubo.hpp"
#include "qamp/rng.hpp"
#include "qamp/state.hpp"

namespace qamp {

struct QaoaConfig {
    int depth = 1;            // p
    int optimizer_steps = 1;  // w
    int shots_per_step = 1024; // l
    double learning_rate = 0.05;
    double fd_epsilon = 1e-3; // central-difference perturbation
    std::vector<double> init_params; // 2p values: gamma_0..gamma_{p-1}, beta_0..beta_{p-1}
    std::uint64_t seed = 0;
    bool exact_expectation = true;
};

// |gamma,beta> = prod_layers [ Rx(beta)^n * e^{-i gamma H} ] |+>^n
inline std::vector<cdouble> qaoa_state(const EnergyTable& table,
                                       const std::vector<double>& params) {
    const int p = static_cast<int>(params.size()) / 2;
    if (params.size() != 2 * static_cast<std::size_t>(p) || params.empty() || p < 1)
        throw std::invalid_argument("qaoa_state: params must hold 2p values, p >= 1");
    const std::uint64_t dim = table.energies.size();
    std::vector<cdouble> psi(dim, cdouble(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    for (int layer = 0; layer < p; ++layer) {
        const double gamma = params[layer];
        const double beta = params[p + layer];
        for (std::uint64_t k = 0; k < dim; ++k)
            psi[k] *= std::polar(1.0, -gamma * table.energies[k]);
        for (int q = 0; q < table.n_qubits; ++q) rx_on_qubit(psi, q, beta);
    }
    return psi;
}

inline double expected_energy(const std::vector<cdouble>& psi, const EnergyTable& table) {
    double e = 0.0;
    for (std::uint64_t k = 0; k < psi.size(); ++k) e += std::norm(psi[k]) * table.energies[k];
    return e;
}

inline std::uint64_t sample_bitstring(const std::vector<cdouble>& psi, RngStream& rng) {
    double u = rng.uniform();
    for (std::uint64_t k = 0; k < psi.size(); ++k) {
        u -= std::norm(psi[k]);
        if (u <= 0.0) return k;
    }
    return psi.size() - 1;
}

struct QaoaStep {
    int step = 0;
    double energy = 0.0;
    double p_good = 0.0;
    std::uint64_t cumulative_shots = 0;
};

struct QaoaResult {
    std::vector<double> best_params;
    std::vector<QaoaStep> history;
    std::uint64_t total_shots = 0; // w * l
};

// Finite-difference gradient descent on <H>. Exact mode evaluates the
// expectation from the state; shot mode estimates it from l samples per
// evaluation. The shot ledger charges w * l regardless of mode, matching the
// accounting used for the method comparison.
inline QaoaResult qaoa_optimize(const EnergyTable& table, const QaoaConfig& cfg) {
    if (cfg.depth < 1 || cfg.optimizer_steps < 0 || cfg.shots_per_step < 1)
        throw std::invalid_argument("qaoa_optimize: bad config");
    std::vector<double> params = cfg.init_params;
    RngStream rng(cfg.seed, 0);
    if (params.empty()) {
        params.resize(2 * static_cast<std::size_t>(cfg.depth));
        for (auto& v : params) v = rng.uniform(-0.1, 0.1);
    }
    if (params.size() != 2 * static_cast<std::size_t>(cfg.depth))
        throw std::invalid_argument("qaoa_optimize: init_params must hold 2p values");

    auto estimate = [&](const std::vector<double>& pr) {
        const auto psi = qaoa_state(table, pr);
        if (cfg.exact_expectation) return expected_energy(psi, table);
        double sum = 0.0;
        for (int s = 0; s < cfg.shots_per_step; ++s)
            sum += table.energies[sample_bitstring(psi, rng)];
        return sum / cfg.shots_per_step;
    };

    QaoaResult result;
    for (int step = 0; step < cfg.optimizer_steps; ++step) {
        std::vector<double> grad(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            auto lo = params, hi = params;
            hi[i] += cfg.fd_epsilon;
            lo[i] -= cfg.fd_epsilon;
            grad[i] = (estimate(hi) - estimate(lo)) / (2.0 * cfg.fd_epsilon);
        }
        for (std::size_t i = 0; i < params.size(); ++i)
            params[i] -= cfg.learning_rate * grad[i];
        const auto psi = qaoa_state(table, params);
        const double energy = expected_energy(psi, table);
        if (!std::isfinite(energy))
            throw std::runtime_error("qaoa_optimize: non-finite energy (parameter blow-up)");
        QaoaStep rec;
        rec.step = step;
        rec.energy = energy;
        rec.p_good = p_good(psi, table);
        rec.cumulative_shots =
            static_cast<std::uint64_t>(step + 1) * static_cast<std::uint64_t>(cfg.shots_per_step);
        result.history.push_back(rec);
    }
    result.best_params = std::move(params);
    result.total_shots = static_cast<std::uint64_t>(cfg.optimizer_steps) *
                         static_cast<std::uint64_t>(cfg.shots_per_step);
    return result;
}

} // namespace qamp
