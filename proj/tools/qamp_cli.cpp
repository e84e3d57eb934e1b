// Command-line driver: spectrum dumps, amplification runs, QAOA baseline,
// convergence sweeps, the noise-contrast study, and the method comparison.
// All subcommands are deterministic given (inputs, flags, seed).

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qamp/amplifier.hpp"
#include "qamp/experiments.hpp"
#include "qamp/graph.hpp"
#include "qamp/io.hpp"
#include "qamp/qaoa.hpp"
#include "qamp/qubo.hpp"

namespace {

constexpr int kExitBadArgs = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitRuntime = 4;

struct BadArgs : std::runtime_error {
    using std::runtime_error::runtime_error;
};

qamp::Graph resolve_graph(const std::string& file, const std::vector<double>& random,
                          std::uint64_t seed) {
    if (!file.empty()) return qamp::load_graph(file);
    if (random.size() != 2)
        throw BadArgs("specify exactly one graph source: --graph FILE or --random n p");
    qamp::RngStream rng(seed, 0x67726170);
    return qamp::random_connected_graph(static_cast<int>(random.at(0)), random.at(1), rng);
}

void write_result(const qamp::ExperimentResult& res, const std::string& out_dir,
                  const std::string& stem, const std::string& format) {
    std::filesystem::create_directories(out_dir);
    if (format == "csv" || format == "both") {
        auto f = qamp::open_out(out_dir + "/" + stem + ".csv");
        res.write_csv(f);
    }
    if (format == "json" || format == "both") {
        auto f = qamp::open_out(out_dir + "/" + stem + ".json");
        res.write_json(f);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measurement-driven ground-state amplification on vertex-cover QUBOs"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string graph_file;
    std::vector<double> random_graph; // n p
    std::string out_dir = "out";
    std::string format = "csv";
    std::uint64_t seed = 0;
    int layers = 50;
    int shots = 2048;
    double a_weight = 1.0, b_weight = 2.0;
    int threads = 1;

    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--format", format, "Output format: csv, json, or both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();
    app.add_option("--seed", seed, "RNG seed")->capture_default_str();
    app.add_option("--threads", threads, "Worker cap (current implementation is sequential)")
        ->capture_default_str();

    auto add_graph_opts = [&](CLI::App* sub) {
        auto* f = sub->add_option("--graph", graph_file, "Graph file (.txt edge list or .json)");
        auto* r = sub->add_option("--random", random_graph,
                                  "Random connected G(n,p): two values n p")
                      ->expected(2);
        f->excludes(r);
        r->excludes(f);
    };

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "Dump the QUBO energy table");
    add_graph_opts(spectrum);
    std::string bounds_mode = "exact";
    int k_min = -1;
    spectrum->add_option("--a", a_weight, "Objective weight A")->capture_default_str();
    spectrum->add_option("--b", b_weight, "Penalty weight B")->capture_default_str();
    spectrum->add_option("--bounds", bounds_mode, "Bounds mode: exact or analytic")
        ->check(CLI::IsMember({"exact", "analytic"}))
        ->capture_default_str();
    spectrum->add_option("--k-min", k_min,
                         "Known minimum cover size for analytic lower bound (-1 = unknown)")
        ->capture_default_str();

    // amplify
    auto* amplify = app.add_subcommand("amplify", "Run the amplification algorithm");
    add_graph_opts(amplify);
    std::string mode = "trajectory";
    double mixer_angle = 0.5 * std::numbers::pi;
    double noise_1q = 0.0, noise_2q = 0.0, readout = 0.0;
    bool protect = false;
    amplify->add_option("--layers", layers, "Iteration count")->capture_default_str();
    amplify->add_option("--shots", shots, "Shots (trajectory mode)")->capture_default_str();
    amplify->add_option("--mode", mode, "trajectory, postselect, or analytic")
        ->check(CLI::IsMember({"trajectory", "postselect", "analytic"}))
        ->capture_default_str();
    amplify->add_option("--mixer-angle", mixer_angle, "Mixer Rx angle")->capture_default_str();
    amplify->add_option("--noise-1q", noise_1q, "Depolarizing probability per 1q gate")
        ->capture_default_str();
    amplify->add_option("--noise-2q", noise_2q, "Depolarizing probability per controlled op")
        ->capture_default_str();
    amplify->add_option("--readout-flip", readout, "Readout flip probability")
        ->capture_default_str();
    amplify->add_flag("--protect-ancilla", protect, "Suppress all ancilla noise");
    amplify->add_option("--a", a_weight, "Objective weight A")->capture_default_str();
    amplify->add_option("--b", b_weight, "Penalty weight B")->capture_default_str();

    // qaoa
    auto* qaoa = app.add_subcommand("qaoa", "Run the QAOA baseline");
    add_graph_opts(qaoa);
    int depth = 5, steps = 50, shots_per_step = 1024;
    double learning_rate = 0.05, fd_eps = 1e-3;
    bool sampled = false;
    qaoa->add_option("--depth", depth, "Ansatz depth p")->capture_default_str();
    qaoa->add_option("--steps", steps, "Gradient descent steps w")->capture_default_str();
    qaoa->add_option("--shots-per-step", shots_per_step, "Shots per step l")
        ->capture_default_str();
    qaoa->add_option("--learning-rate", learning_rate, "Step size")->capture_default_str();
    qaoa->add_option("--fd-epsilon", fd_eps, "Central-difference perturbation")
        ->capture_default_str();
    qaoa->add_flag("--sampled", sampled, "Estimate expectations from shots instead of exactly");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Random-graph convergence sweep");
    std::vector<int> node_counts{4, 6, 8, 10};
    int instances = 20;
    double edge_p = 0.5;
    sweep->add_option("--nodes", node_counts, "Node counts")->capture_default_str();
    sweep->add_option("--instances", instances, "Instances per node count")
        ->capture_default_str();
    sweep->add_option("--edge-probability", edge_p, "Edge probability")->capture_default_str();
    sweep->add_option("--layers", layers, "Layers")->capture_default_str();
    sweep->add_option("--shots", shots, "Trajectory shots")->capture_default_str();

    // noise-study
    auto* noise_study = app.add_subcommand("noise-study", "Protected-vs-noisy-ancilla study");
    add_graph_opts(noise_study);
    double ns_1q = 0.001, ns_2q = 0.01, ns_readout = 0.02;
    noise_study->add_option("--layers", layers, "Layers")->capture_default_str();
    noise_study->add_option("--shots", shots, "Paired shots per arm")->capture_default_str();
    noise_study->add_option("--noise-1q", ns_1q, "Depolarizing probability per 1q gate")
        ->capture_default_str();
    noise_study->add_option("--noise-2q", ns_2q, "Depolarizing probability per controlled op")
        ->capture_default_str();
    noise_study->add_option("--readout-flip", ns_readout, "Readout flip probability")
        ->capture_default_str();

    // compare
    auto* compare = app.add_subcommand("compare", "Amplifier vs QAOA on one instance");
    add_graph_opts(compare);
    compare->add_option("--layers", layers, "Amplifier layers")->capture_default_str();
    compare->add_option("--shots", shots, "Shots l")->capture_default_str();
    compare->add_option("--depth", depth, "QAOA depth p")->capture_default_str();
    compare->add_option("--steps", steps, "QAOA steps w")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitBadArgs;
    }

    try {
        if (app.got_subcommand(spectrum)) {
            auto g = resolve_graph(graph_file, random_graph, seed);
            auto q = qamp::build_vertex_cover_qubo(g, a_weight, b_weight);
            auto table = qamp::build_energy_table(
                q, bounds_mode == "exact" ? qamp::BoundsMode::exact : qamp::BoundsMode::analytic,
                k_min >= 0 ? std::optional<int>(k_min) : std::nullopt);
            std::filesystem::create_directories(out_dir);
            if (format == "json" || format == "both") {
                nlohmann::json j{{"graph", qamp::graph_to_json(g)},
                                 {"a_weight", a_weight},
                                 {"b_weight", b_weight},
                                 {"e_inf", table.e_inf},
                                 {"e_sup", table.e_sup},
                                 {"ground_energy", table.ground_energy},
                                 {"ground_states", table.ground_states},
                                 {"seed", seed}};
                auto f = qamp::open_out(out_dir + "/spectrum.json");
                f << j.dump(2) << "\n";
            }
            if (format == "csv" || format == "both") {
                auto f = qamp::open_out(out_dir + "/spectrum.csv");
                qamp::write_energy_table_csv(f, table);
            }
            std::cout << "n=" << g.n_vertices << " ground_energy="
                      << qamp::format_double(table.ground_energy)
                      << " n_optima=" << table.ground_states.size() << "\n";
        } else if (app.got_subcommand(amplify)) {
            auto g = resolve_graph(graph_file, random_graph, seed);
            auto q = qamp::build_vertex_cover_qubo(g, a_weight, b_weight);
            auto table = qamp::build_energy_table(q, qamp::BoundsMode::exact);
            qamp::RunConfig cfg;
            cfg.n_layers = layers;
            cfg.mode = mode == "trajectory"  ? qamp::RunMode::trajectory
                       : mode == "postselect" ? qamp::RunMode::postselect
                                              : qamp::RunMode::analytic;
            cfg.mixer_angle = mixer_angle;
            cfg.shots = shots;
            cfg.seed = seed;
            cfg.noise = {noise_1q, noise_2q, readout, protect};
            auto res = qamp::run_amplification(q, table, cfg);
            std::filesystem::create_directories(out_dir);
            {
                auto f = qamp::open_out(out_dir + "/traces.csv");
                f << "shot,layer,p0,outcome,p_good\n";
                for (std::size_t i = 0; i < res.traces.size(); ++i) {
                    const auto& tr = res.traces[i];
                    const std::size_t shot =
                        cfg.mode == qamp::RunMode::trajectory && layers > 0 ? i / layers : 0;
                    f << shot << "," << tr.layer << "," << qamp::format_double(tr.p0) << ","
                      << tr.outcome << "," << qamp::format_double(tr.p_good_after) << "\n";
                }
            }
            if (!res.samples.empty()) {
                auto f = qamp::open_out(out_dir + "/samples.csv");
                f << "bitstring,count\n";
                for (const auto& [k, c] : res.samples)
                    f << qamp::bitstring_of(k, q.n_qubits) << "," << c << "\n";
            }
            if (format == "json" || format == "both") {
                nlohmann::json j{{"graph", qamp::graph_to_json(g)},
                                 {"mode", mode},
                                 {"layers", layers},
                                 {"shots", shots},
                                 {"seed", seed},
                                 {"p_good", res.final_p_good},
                                 {"cumulative_success", res.cumulative_success}};
                auto f = qamp::open_out(out_dir + "/amplify.json");
                f << j.dump(2) << "\n";
            }
            const std::uint64_t total_shots =
                cfg.mode == qamp::RunMode::trajectory ? static_cast<std::uint64_t>(shots) : 0;
            std::cout << "n=" << g.n_vertices << " p_good=" << qamp::format_double(res.final_p_good)
                      << " total_shots=" << total_shots << "\n";
        } else if (app.got_subcommand(qaoa)) {
            auto g = resolve_graph(graph_file, random_graph, seed);
            auto q = qamp::build_vertex_cover_qubo(g, a_weight, b_weight);
            auto table = qamp::build_energy_table(q, qamp::BoundsMode::exact);
            qamp::QaoaConfig cfg;
            cfg.depth = depth;
            cfg.optimizer_steps = steps;
            cfg.shots_per_step = shots_per_step;
            cfg.learning_rate = learning_rate;
            cfg.fd_epsilon = fd_eps;
            cfg.seed = seed;
            cfg.exact_expectation = !sampled;
            auto res = qamp::qaoa_optimize(table, cfg);
            std::filesystem::create_directories(out_dir);
            auto f = qamp::open_out(out_dir + "/qaoa_history.csv");
            f << "step,energy,p_good,cumulative_shots\n";
            for (const auto& st : res.history)
                f << st.step << "," << qamp::format_double(st.energy) << ","
                  << qamp::format_double(st.p_good) << "," << st.cumulative_shots << "\n";
            const double pg = res.history.empty() ? 0.0 : res.history.back().p_good;
            std::cout << "n=" << g.n_vertices << " p_good=" << qamp::format_double(pg)
                      << " total_shots=" << res.total_shots << "\n";
        } else if (app.got_subcommand(sweep)) {
            qamp::SweepSpec spec;
            spec.node_counts = node_counts;
            spec.instances_per_n = instances;
            spec.edge_probability = edge_p;
            spec.layers = layers;
            spec.shots = shots;
            spec.seed = seed;
            auto res = qamp::convergence_sweep(spec);
            write_result(res, out_dir, "sweep_" + std::to_string(node_counts.front()) + "_" +
                                           std::to_string(seed),
                         format);
            std::cout << "sweep instances=" << node_counts.size() * instances
                      << " rows=" << res.rows.size() << "\n";
        } else if (app.got_subcommand(noise_study)) {
            auto g = resolve_graph(graph_file, random_graph, seed);
            qamp::NoiseSpec noise{ns_1q, ns_2q, ns_readout, false};
            auto res = qamp::noise_contrast_study(g, layers, shots, noise, seed);
            write_result(res, out_dir,
                         "noise_" + std::to_string(g.n_vertices) + "_" + std::to_string(seed),
                         format);
            std::cout << "n=" << g.n_vertices << " p_good_protected="
                      << qamp::format_double(res.metadata["mean_p_good_protected"].get<double>())
                      << " p_good_unprotected="
                      << qamp::format_double(res.metadata["mean_p_good_unprotected"].get<double>())
                      << " total_shots=" << 2 * shots << "\n";
        } else if (app.got_subcommand(compare)) {
            auto g = resolve_graph(graph_file, random_graph, seed);
            qamp::RunConfig amp_cfg;
            amp_cfg.mode = qamp::RunMode::postselect;
            amp_cfg.n_layers = layers;
            amp_cfg.shots = shots;
            amp_cfg.seed = seed;
            qamp::QaoaConfig qaoa_cfg;
            qaoa_cfg.depth = depth;
            qaoa_cfg.optimizer_steps = steps;
            qaoa_cfg.shots_per_step = shots;
            qaoa_cfg.seed = seed;
            auto res = qamp::comparison_study(g, amp_cfg, qaoa_cfg);
            write_result(res, out_dir,
                         "compare_" + std::to_string(g.n_vertices) + "_" + std::to_string(seed),
                         format);
            std::cout << "n=" << g.n_vertices << " amplifier_p_good="
                      << qamp::format_double(res.metadata["amplifier_p_good"].get<double>())
                      << " qaoa_p_good="
                      << qamp::format_double(res.metadata["qaoa_p_good"].get<double>())
                      << " qaoa_total_shots=" << res.metadata["qaoa_total_shots"].get<std::uint64_t>()
                      << "\n";
        }
    } catch (const BadArgs& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
