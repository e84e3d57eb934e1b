#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qamp/amplifier.hpp"
#include "qamp/graph.hpp"
#include "qamp/io.hpp"
#include "qamp/qaoa.hpp"
#include "qamp/qubo.hpp"

namespace qamp {

struct SweepSpec {
    std::vector<int> node_counts{4, 6, 8, 10};
    int instances_per_n = 20;
    double edge_probability = 0.5;
    int layers = 50;
    int shots = 2048;
    std::uint64_t seed = 0;
};

// Flat table of named numeric columns plus reproducibility metadata.
struct ExperimentResult {
    nlohmann::json metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write_csv(std::ostream& out) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i)
                out << format_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }

    void write_json(std::ostream& out) const {
        nlohmann::json j;
        j["metadata"] = metadata;
        j["columns"] = columns;
        j["rows"] = rows;
        out << j.dump(2) << "\n";
    }
};

namespace detail {

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return (v.size() % 2) ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * (v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

// Energy-based pseudo approximation ratio (E_max - <E>)/(E_max - E_0).
inline double energy_ratio(const std::vector<cdouble>& coeffs, const EnergyTable& table) {
    double emax = table.energies[0];
    for (double e : table.energies) emax = std::max(emax, e);
    if (emax == table.ground_energy) return 1.0;
    double mean = 0.0;
    for (std::uint64_t k = 0; k < coeffs.size(); ++k)
        mean += std::norm(coeffs[k]) * table.energies[k];
    return (emax - mean) / (emax - table.ground_energy);
}

} // namespace detail

// Per-layer P_good under repeated outcome-0 filtering of the uniform start.
inline std::vector<double> postselect_curve(const EnergyTable& table, int layers) {
    const std::uint64_t dim = table.energies.size();
    std::vector<cdouble> coeffs(dim, cdouble(std::pow(2.0, -0.5 * table.n_qubits), 0.0));
    std::vector<double> curve;
    curve.reserve(layers + 1);
    curve.push_back(p_good(coeffs, table));
    for (int l = 0; l < layers; ++l) {
        coeffs = analytic_filter(coeffs, table, 0).first;
        curve.push_back(p_good(coeffs, table));
    }
    return curve;
}

// First layer at which the postselect curve reaches `threshold`; `cap` if never.
inline int layers_to_threshold(const EnergyTable& table, double threshold, int cap = 20000) {
    const std::uint64_t dim = table.energies.size();
    std::vector<cdouble> coeffs(dim, cdouble(std::pow(2.0, -0.5 * table.n_qubits), 0.0));
    if (p_good(coeffs, table) >= threshold) return 0;
    for (int l = 1; l <= cap; ++l) {
        coeffs = analytic_filter(coeffs, table, 0).first;
        if (p_good(coeffs, table) >= threshold) return l;
    }
    return cap;
}

// Random-graph convergence sweep: per (n, instance, layer) postselect P_good,
// trajectory mean P_good, energy ratio and optimum multiplicity, plus
// per-(n, layer) aggregates across instances.
inline ExperimentResult convergence_sweep(const SweepSpec& spec) {
    ExperimentResult res;
    res.metadata = {{"study", "convergence_sweep"},
                    {"node_counts", spec.node_counts},
                    {"instances_per_n", spec.instances_per_n},
                    {"edge_probability", spec.edge_probability},
                    {"layers", spec.layers},
                    {"shots", spec.shots},
                    {"seed", spec.seed},
                    {"a_weight", 1.0},
                    {"b_weight", 2.0}};
    res.columns = {"n",       "instance", "layer",        "p_good_postselect",
                   "p_good_trajectory", "energy_ratio", "n_optima"};

    nlohmann::json aggregates = nlohmann::json::array();
    std::uint64_t stream = 0;
    for (int n : spec.node_counts) {
        std::vector<std::vector<double>> post_curves;
        for (int inst = 0; inst < spec.instances_per_n; ++inst) {
            RngStream grng(spec.seed, stream++);
            Graph g = random_connected_graph(n, spec.edge_probability, grng);
            auto q = build_vertex_cover_qubo(g, 1.0, 2.0);
            auto table = build_energy_table(q, BoundsMode::exact);

            auto curve = postselect_curve(table, spec.layers);
            post_curves.push_back(curve);

            RunConfig traj;
            traj.mode = RunMode::trajectory;
            traj.shots = spec.shots;
            traj.seed = spec.seed + 0x1000 * stream;
            // layer-resolved trajectory P_good from per-shot traces
            traj.n_layers = spec.layers;
            auto tres = run_amplification(q, table, traj);
            std::vector<double> traj_mean(spec.layers + 1, 0.0);
            traj_mean[0] =
                static_cast<double>(table.ground_states.size()) / static_cast<double>(1u << n);
            for (int layer = 0; layer < spec.layers; ++layer) {
                double sum = 0.0;
                for (int shot = 0; shot < spec.shots; ++shot)
                    sum += tres.traces[static_cast<std::size_t>(shot) * spec.layers + layer]
                               .p_good_after;
                traj_mean[layer + 1] = sum / spec.shots;
            }

            const std::uint64_t dim = std::uint64_t{1} << n;
            std::vector<cdouble> coeffs(dim, cdouble(std::pow(2.0, -0.5 * n), 0.0));
            for (int layer = 0; layer <= spec.layers; ++layer) {
                res.rows.push_back({static_cast<double>(n), static_cast<double>(inst),
                                    static_cast<double>(layer), curve[layer], traj_mean[layer],
                                    detail::energy_ratio(coeffs, table),
                                    static_cast<double>(table.ground_states.size())});
                if (layer < spec.layers) coeffs = analytic_filter(coeffs, table, 0).first;
            }
        }
        for (int layer = 0; layer <= spec.layers; ++layer) {
            std::vector<double> vals;
            for (const auto& c : post_curves) vals.push_back(c[layer]);
            aggregates.push_back({{"n", n},
                                  {"layer", layer},
                                  {"median_p_good", detail::median(vals)},
                                  {"q25_p_good", detail::quantile(vals, 0.25)},
                                  {"q75_p_good", detail::quantile(vals, 0.75)}});
        }
    }
    res.metadata["aggregates"] = aggregates;
    return res;
}

// Paired noisy-vs-protected-ancilla trajectory study on one instance.
inline ExperimentResult noise_contrast_study(const Graph& g, int layers, int shots,
                                             const NoiseSpec& noise, std::uint64_t seed) {
    auto q = build_vertex_cover_qubo(g, 1.0, 2.0);
    auto table = build_energy_table(q, BoundsMode::exact);

    auto run_arm = [&](bool protect) {
        RunConfig cfg;
        cfg.mode = RunMode::trajectory;
        cfg.n_layers = layers;
        cfg.shots = shots;
        cfg.seed = seed;
        cfg.noise = noise;
        cfg.noise.protect_ancilla = protect;
        return run_amplification(q, table, cfg);
    };
    auto unprotected = run_arm(false);
    auto protectedArm = run_arm(true);

    ExperimentResult res;
    res.metadata = {{"study", "noise_contrast"},
                    {"graph", graph_to_json(g)},
                    {"layers", layers},
                    {"shots", shots},
                    {"seed", seed},
                    {"depolarizing_1q", noise.depolarizing_1q},
                    {"depolarizing_2q", noise.depolarizing_2q},
                    {"readout_flip", noise.readout_flip},
                    {"mean_p_good_unprotected", unprotected.final_p_good},
                    {"mean_p_good_protected", protectedArm.final_p_good}};
    res.columns = {"protect_ancilla", "shot", "layer", "p0", "outcome", "p_good_after"};
    for (int arm = 0; arm < 2; ++arm) {
        const auto& r = (arm == 0) ? unprotected : protectedArm;
        for (std::size_t i = 0; i < r.traces.size(); ++i) {
            const auto& tr = r.traces[i];
            res.rows.push_back({static_cast<double>(arm),
                                static_cast<double>(i / static_cast<std::size_t>(layers)),
                                static_cast<double>(tr.layer), tr.p0,
                                static_cast<double>(tr.outcome), tr.p_good_after});
        }
    }
    return res;
}

// Same-instance amplifier-vs-QAOA comparison with explicit shot ledgers.
inline ExperimentResult comparison_study(const Graph& g, const RunConfig& amplifier_cfg,
                                         const QaoaConfig& qaoa_cfg) {
    auto q = build_vertex_cover_qubo(g, 1.0, 2.0);
    auto table = build_energy_table(q, BoundsMode::exact);

    auto amp = run_amplification(q, table, amplifier_cfg);
    auto qaoa = qaoa_optimize(table, qaoa_cfg);

    const std::uint64_t amp_shots = (amplifier_cfg.mode == RunMode::trajectory)
                                        ? static_cast<std::uint64_t>(amplifier_cfg.shots)
                                        : static_cast<std::uint64_t>(qaoa_cfg.shots_per_step);
    ExperimentResult res;
    res.metadata = {{"study", "comparison"},
                    {"graph", graph_to_json(g)},
                    {"amplifier_layers", amplifier_cfg.n_layers},
                    {"amplifier_p_good", amp.final_p_good},
                    {"amplifier_total_shots", amp_shots},
                    {"qaoa_depth", qaoa_cfg.depth},
                    {"qaoa_steps", qaoa_cfg.optimizer_steps},
                    {"qaoa_shots_per_step", qaoa_cfg.shots_per_step},
                    {"qaoa_p_good", qaoa.history.empty() ? 0.0 : qaoa.history.back().p_good},
                    {"qaoa_total_shots", qaoa.total_shots},
                    {"seed", amplifier_cfg.seed}};
    res.columns = {"method", "step", "energy", "p_good", "cumulative_shots"};
    for (std::size_t layer = 0; layer < amp.traces.size(); ++layer)
        res.rows.push_back({0.0, static_cast<double>(layer), 0.0, amp.traces[layer].p_good_after,
                            static_cast<double>(amp_shots)});
    for (const auto& st : qaoa.history)
        res.rows.push_back({1.0, static_cast<double>(st.step), st.energy, st.p_good,
                            static_cast<double>(st.cumulative_shots)});
    return res;
}

} // namespace qamp
