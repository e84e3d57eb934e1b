#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qamp/qubo.hpp"
#include "qamp/rng.hpp"
#include "qamp/state.hpp"

namespace qamp {

inline constexpr double kDeadOutcomeTol = 1e-15;

struct FilterParams {
    double theta = 0.0;
    double t = 0.0;
};

// theta = -pi*E_inf/(E_sup-E_inf), t = -pi/(E_sup-E_inf); with these the
// cosine filter is 1 at E_inf and 0 at E_sup.
inline FilterParams select_parameters(const EnergyTable& table) {
    const double span = table.e_sup - table.e_inf;
    if (!(span > 0.0))
        throw std::invalid_argument("select_parameters: degenerate spectrum (e_sup == e_inf)");
    return {-std::numbers::pi * table.e_inf / span, -std::numbers::pi / span};
}

// Filter angle of basis state k: (pi/2) * (E_k - E_inf) / (E_sup - E_inf).
inline double filter_angle(const EnergyTable& table, std::uint64_t k) {
    return 0.5 * std::numbers::pi * (table.energies[k] - table.e_inf) /
           (table.e_sup - table.e_inf);
}

// Closed-form post-measurement map. Outcome 0 multiplies amplitudes by
// e^{i vartheta_k} cos(vartheta_k), outcome 1 by -i e^{i vartheta_k}
// sin(vartheta_k), then renormalizes. The phases are exactly those produced
// by the H / controlled-e^{-iHt} / R_z / H gate sequence, so circuit and
// closed form agree amplitude-by-amplitude, not just in modulus.
inline std::pair<std::vector<cdouble>, double>
analytic_filter(const std::vector<cdouble>& coeffs, const EnergyTable& table, int outcome) {
    if (coeffs.size() != table.energies.size())
        throw std::invalid_argument("analytic_filter: size mismatch");
    std::vector<cdouble> out(coeffs.size());
    double p = 0.0;
    for (std::uint64_t k = 0; k < coeffs.size(); ++k) {
        const double v = filter_angle(table, k);
        const double mag = (outcome == 0) ? std::cos(v) : std::sin(v);
        cdouble factor = std::polar(1.0, v) * mag;
        if (outcome == 1) factor *= cdouble(0.0, -1.0);
        out[k] = coeffs[k] * factor;
        p += std::norm(out[k]);
    }
    if (p < kDeadOutcomeTol)
        throw std::runtime_error("analytic_filter: requested outcome has zero probability");
    const double inv = 1.0 / std::sqrt(p);
    for (auto& a : out) a *= inv;
    return {std::move(out), p};
}

enum class RunMode { trajectory, postselect, analytic };

struct RunConfig {
    int n_layers = 1;
    RunMode mode = RunMode::trajectory;
    double mixer_angle = 0.5 * std::numbers::pi;
    std::optional<double> theta_override;
    std::optional<double> t_override;
    int shots = 1;
    NoiseSpec noise;
    std::uint64_t seed = 0;
};

struct IterationTrace {
    int layer = 0;
    double p0 = 0.0;
    int outcome = 0;
    double p_good_after = 0.0;
    double state_norm_check = 0.0;
};

// P_good over exact coefficients: total probability mass on ground states.
inline double p_good(const std::vector<cdouble>& coeffs, const EnergyTable& table) {
    if (table.ground_states.empty()) throw std::invalid_argument("p_good: no ground states");
    double p = 0.0;
    for (auto k : table.ground_states) p += std::norm(coeffs[k]);
    return p;
}

// P_good over bitstring samples: fraction landing in the ground set.
inline double p_good(const std::map<std::uint64_t, std::uint64_t>& samples,
                     const EnergyTable& table) {
    if (table.ground_states.empty()) throw std::invalid_argument("p_good: no ground states");
    std::uint64_t total = 0, good = 0;
    for (const auto& [k, count] : samples) {
        total += count;
        for (auto g : table.ground_states)
            if (g == k) good += count;
    }
    return total == 0 ? 0.0 : static_cast<double>(good) / static_cast<double>(total);
}

inline double p_good_state(const AncillaBranchState& s, const EnergyTable& table) {
    double p = 0.0;
    for (auto k : table.ground_states) p += s.system_prob(k);
    return p / s.norm2();
}

// One circuit layer: H(anc), controlled e^{-iHt}, R_z(theta) on anc, H(anc),
// ancilla measurement with reset. When forced_outcome is set, the branch is
// selected deterministically instead of sampled (testing hook).
inline IterationTrace hadamard_test_iteration(AncillaBranchState& s, const EnergyTable& table,
                                              double theta, double t, RngStream& rng,
                                              const NoiseSpec& noise = {},
                                              std::optional<int> forced_outcome = std::nullopt) {
    ancilla_hadamard(s);
    apply_noise_channel(s, kAncillaSite, rng, noise, noise.depolarizing_1q);
    controlled_phase_evolution(s, table, t);
    apply_noise_channel(s, kAncillaSite, rng, noise, noise.depolarizing_2q);
    for (int q = 0; q < s.n_qubits; ++q)
        apply_noise_channel(s, q, rng, noise, noise.depolarizing_2q);
    ancilla_rz(s, theta);
    apply_noise_channel(s, kAncillaSite, rng, noise, noise.depolarizing_1q);
    ancilla_hadamard(s);
    apply_noise_channel(s, kAncillaSite, rng, noise, noise.depolarizing_1q);

    IterationTrace trace;
    if (forced_outcome) {
        const auto& branch = (*forced_outcome == 0) ? s.branch0 : s.branch1;
        double nb = 0.0, ntot = s.norm2();
        for (const auto& a : branch) nb += std::norm(a);
        if (nb / ntot < kDeadOutcomeTol)
            throw std::runtime_error("hadamard_test_iteration: forced outcome has zero probability");
        double n0 = 0.0;
        for (const auto& a : s.branch0) n0 += std::norm(a);
        trace.p0 = n0 / ntot;
        const double inv = 1.0 / std::sqrt(nb);
        if (*forced_outcome == 1) s.branch0 = s.branch1;
        for (auto& a : s.branch0) a *= inv;
        std::fill(s.branch1.begin(), s.branch1.end(), cdouble(0.0, 0.0));
        trace.outcome = *forced_outcome;
    } else {
        const MeasureResult m = measure_ancilla(s, rng, noise);
        trace.p0 = m.p0;
        trace.outcome = m.outcome;
    }
    trace.p_good_after = p_good_state(s, table);
    trace.state_norm_check = s.norm2();
    return trace;
}

struct RunResult {
    // trace stream; in trajectory mode traces are grouped by shot
    // (shot index = trace position / n_layers)
    std::vector<IterationTrace> traces;
    std::vector<cdouble> final_coeffs;            // postselect / analytic modes
    double cumulative_success = 1.0;              // product of per-layer p0 (postselect/analytic)
    std::map<std::uint64_t, std::uint64_t> samples; // trajectory mode
    double final_p_good = 0.0;
};

inline RunResult run_amplification(const QuboHamiltonian& q, const EnergyTable& table,
                                   const RunConfig& cfg) {
    if (cfg.n_layers < 0) throw std::invalid_argument("run_amplification: n_layers < 0");
    if (cfg.mode == RunMode::trajectory && cfg.shots < 1)
        throw std::invalid_argument("run_amplification: shots < 1 in trajectory mode");
    validate_noise(cfg.noise);
    FilterParams params{};
    if (cfg.theta_override && cfg.t_override) {
        params = {*cfg.theta_override, *cfg.t_override};
    } else {
        params = select_parameters(table);
        if (cfg.theta_override) params.theta = *cfg.theta_override;
        if (cfg.t_override) params.t = *cfg.t_override;
    }

    RunResult result;
    if (cfg.mode == RunMode::analytic) {
        const std::uint64_t dim = std::uint64_t{1} << q.n_qubits;
        std::vector<cdouble> coeffs(dim, cdouble(std::pow(2.0, -0.5 * q.n_qubits), 0.0));
        for (int layer = 0; layer < cfg.n_layers; ++layer) {
            auto [next, p0] = analytic_filter(coeffs, table, 0);
            coeffs = std::move(next);
            result.cumulative_success *= p0;
            result.traces.push_back({layer, p0, 0, p_good(coeffs, table), 1.0});
        }
        result.final_p_good = p_good(coeffs, table);
        result.final_coeffs = std::move(coeffs);
        return result;
    }

    if (cfg.mode == RunMode::postselect) {
        RngStream rng(cfg.seed, 0); // unused in noiseless forced runs, kept for signature parity
        AncillaBranchState s = init_plus_state(q.n_qubits);
        for (int layer = 0; layer < cfg.n_layers; ++layer) {
            IterationTrace tr =
                hadamard_test_iteration(s, table, params.theta, params.t, rng, {}, 0);
            tr.layer = layer;
            result.cumulative_success *= tr.p0;
            result.traces.push_back(tr);
        }
        result.final_p_good = p_good_state(s, table);
        result.final_coeffs = std::move(s.branch0);
        return result;
    }

    // trajectory mode
    double good_sum = 0.0;
    for (int shot = 0; shot < cfg.shots; ++shot) {
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(shot));
        AncillaBranchState s = init_plus_state(q.n_qubits);
        for (int layer = 0; layer < cfg.n_layers; ++layer) {
            IterationTrace tr =
                hadamard_test_iteration(s, table, params.theta, params.t, rng, cfg.noise);
            tr.layer = layer;
            if (tr.outcome == 1) {
                mixer_rx_all(s, cfg.mixer_angle);
                for (int qb = 0; qb < s.n_qubits; ++qb)
                    apply_noise_channel(s, qb, rng, cfg.noise, cfg.noise.depolarizing_1q);
            }
            result.traces.push_back(tr);
        }
        std::uint64_t k = sample_system(s, rng);
        for (int qb = 0; qb < s.n_qubits; ++qb)
            if (rng.bernoulli(cfg.noise.readout_flip)) k ^= std::uint64_t{1} << qb;
        ++result.samples[k];
        bool good = false;
        for (auto g : table.ground_states) good = good || (g == k);
        good_sum += good ? 1.0 : 0.0;
    }
    result.final_p_good = good_sum / cfg.shots;
    return result;
}

} // namespace qamp
