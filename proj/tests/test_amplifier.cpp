#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "qamp/amplifier.hpp"
#include "qamp/qubo.hpp"

using namespace qamp;

namespace {

Graph paw4() { return {4, {{0, 1}, {0, 2}, {0, 3}, {1, 3}}}; }

EnergyTable paw_table() {
    auto q = build_vertex_cover_qubo(paw4(), 1.0, 2.0);
    return build_energy_table(q, BoundsMode::exact);
}

EnergyTable random_table(int n, RngStream& rng) {
    EnergyTable t;
    t.n_qubits = n;
    const std::uint64_t dim = std::uint64_t{1} << n;
    t.energies.resize(dim);
    for (auto& e : t.energies) e = rng.uniform(-5, 5);
    double lo = t.energies[0], hi = t.energies[0];
    for (double e : t.energies) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    // random valid bounds around the spectrum
    t.e_inf = lo - rng.uniform(0, 1);
    t.e_sup = hi + rng.uniform(0, 1);
    t.ground_energy = lo;
    for (std::uint64_t k = 0; k < dim; ++k)
        if (t.energies[k] == lo) t.ground_states.push_back(k);
    return t;
}

std::vector<cdouble> random_coeffs(std::uint64_t dim, RngStream& rng) {
    std::vector<cdouble> c(dim);
    double n2 = 0.0;
    for (auto& a : c) {
        a = cdouble(rng.uniform(-1, 1), rng.uniform(-1, 1));
        n2 += std::norm(a);
    }
    for (auto& a : c) a /= std::sqrt(n2);
    return c;
}

std::vector<cdouble> uniform_coeffs(int n) {
    return std::vector<cdouble>(std::uint64_t{1} << n, cdouble(std::pow(2.0, -0.5 * n), 0.0));
}

} // namespace

TEST_CASE("select_parameters reproduces the closed-form angles") {
    EnergyTable t;
    t.e_inf = 0.0;
    t.e_sup = 12.0;
    auto p = select_parameters(t);
    CHECK(p.theta == 0.0);
    CHECK(p.t == Catch::Approx(-std::numbers::pi / 12.0).margin(1e-15));

    t.e_inf = -1.0;
    t.e_sup = 1.0;
    p = select_parameters(t);
    CHECK(p.theta == Catch::Approx(0.5 * std::numbers::pi).margin(1e-15));
    CHECK(p.t == Catch::Approx(-0.5 * std::numbers::pi).margin(1e-15));
    CHECK(std::cos(0.5 * (p.theta - p.t * -1.0)) == Catch::Approx(1.0).margin(1e-15));
    CHECK(std::cos(0.5 * (p.theta - p.t * 1.0)) == Catch::Approx(0.0).margin(1e-15));

    t.e_sup = t.e_inf;
    CHECK_THROWS_AS(select_parameters(t), std::invalid_argument);
}

TEST_CASE("filter angle identity links the circuit angles to the normalized form") {
    RngStream rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        auto t = random_table(4, rng);
        auto p = select_parameters(t);
        for (std::uint64_t k = 0; k < 16; ++k) {
            const double circuit = 0.5 * (p.theta - p.t * t.energies[k]);
            CHECK(circuit == Catch::Approx(filter_angle(t, k)).margin(1e-12));
        }
    }
}

TEST_CASE("analytic filter fixed points and dead ends") {
    EnergyTable t;
    t.n_qubits = 1;
    t.energies = {0.0, 5.0};
    t.e_inf = 0.0;
    t.e_sup = 5.0;
    t.ground_energy = 0.0;
    t.ground_states = {0};

    std::vector<cdouble> ground{1.0, 0.0};
    auto [out, p] = analytic_filter(ground, t, 0);
    CHECK(p == Catch::Approx(1.0).margin(1e-15));
    CHECK(std::abs(out[0] - ground[0]) < 1e-15);

    std::vector<cdouble> top{0.0, 1.0};
    CHECK_THROWS_AS(analytic_filter(top, t, 0), std::runtime_error);
}

TEST_CASE("one filter step on the uniform worked-instance state") {
    auto t = paw_table();
    auto c = uniform_coeffs(4);
    const double before = p_good(c, t);
    auto [after, p] = analytic_filter(c, t, 0);
    CHECK(p_good(after, t) > before);
    for (std::uint64_t k = 0; k < 16; ++k)
        if (t.energies[k] == t.e_sup) CHECK(std::abs(after[k]) < 1e-15);
}

TEST_CASE("circuit iteration equals the analytic filter (oracle equivalence)") {
    RngStream rng(23);
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5)); // 2..6
        auto t = random_table(n, rng);
        auto coeffs = random_coeffs(t.energies.size(), rng);
        const int outcome = static_cast<int>(rng.below(2));

        std::vector<cdouble> expected;
        double p_expected;
        try {
            std::tie(expected, p_expected) = analytic_filter(coeffs, t, outcome);
        } catch (const std::runtime_error&) {
            continue; // zero-probability branch, nothing to compare
        }

        AncillaBranchState s;
        s.n_qubits = n;
        s.branch0 = coeffs;
        s.branch1.assign(coeffs.size(), cdouble(0, 0));
        auto params = select_parameters(t);
        auto tr = hadamard_test_iteration(s, t, params.theta, params.t, rng, {}, outcome);

        const double p_circuit = outcome == 0 ? tr.p0 : 1.0 - tr.p0;
        CHECK(p_circuit == Catch::Approx(p_expected).margin(1e-12));
        for (std::uint64_t k = 0; k < expected.size(); ++k)
            CHECK(std::abs(s.branch0[k] - expected[k]) < 1e-10);
    }
}

TEST_CASE("outcome probabilities are complete") {
    RngStream rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        auto t = random_table(3, rng);
        auto c = random_coeffs(8, rng);
        double p0 = 0.0, p1 = 0.0;
        for (std::uint64_t k = 0; k < 8; ++k) {
            p0 += std::norm(c[k]) * std::pow(std::cos(filter_angle(t, k)), 2);
            p1 += std::norm(c[k]) * std::pow(std::sin(filter_angle(t, k)), 2);
        }
        CHECK(p0 + p1 == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("iteration on a pure ground state is a fixed point") {
    auto t = paw_table();
    AncillaBranchState s;
    s.n_qubits = 4;
    s.branch0.assign(16, cdouble(0, 0));
    s.branch1.assign(16, cdouble(0, 0));
    s.branch0[t.ground_states[0]] = 1.0;
    auto params = select_parameters(t);
    RngStream rng(1);
    auto tr = hadamard_test_iteration(s, t, params.theta, params.t, rng);
    CHECK(tr.outcome == 0);
    CHECK(tr.p0 == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(std::abs(s.branch0[t.ground_states[0]]) - 1.0) < 1e-12);
}

TEST_CASE("forced outcome 1 with tight lower bound zeroes the ground amplitude") {
    auto t = paw_table();
    AncillaBranchState s;
    s.n_qubits = 4;
    s.branch0 = uniform_coeffs(4);
    s.branch1.assign(16, cdouble(0, 0));
    auto params = select_parameters(t);
    RngStream rng(1);
    hadamard_test_iteration(s, t, params.theta, params.t, rng, {}, 1);
    for (auto g : t.ground_states) CHECK(std::abs(s.branch0[g]) < 1e-12);
}

TEST_CASE("postselection monotonicity with tight bounds") {
    RngStream rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(4));
        Graph g = random_connected_graph(n, 0.5, rng);
        auto q = build_vertex_cover_qubo(g, 1.0, 2.0);
        auto t = build_energy_table(q, BoundsMode::exact);
        auto c = uniform_coeffs(n);
        double prev = p_good(c, t);
        for (int layer = 0; layer < 30; ++layer) {
            c = analytic_filter(c, t, 0).first;
            const double cur = p_good(c, t);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("postselect and analytic modes agree") {
    auto q = build_vertex_cover_qubo(paw4(), 1.0, 2.0);
    auto t = paw_table();
    RunConfig cfg;
    cfg.n_layers = 20;
    cfg.mode = RunMode::postselect;
    auto post = run_amplification(q, t, cfg);
    cfg.mode = RunMode::analytic;
    auto ana = run_amplification(q, t, cfg);
    CHECK(post.final_p_good == Catch::Approx(ana.final_p_good).margin(1e-10));
    CHECK(post.cumulative_success == Catch::Approx(ana.cumulative_success).margin(1e-10));
    for (std::uint64_t k = 0; k < 16; ++k)
        CHECK(std::abs(post.final_coeffs[k] - ana.final_coeffs[k]) < 1e-10);
    for (int l = 0; l < 20; ++l)
        CHECK(post.traces[l].p0 == Catch::Approx(ana.traces[l].p0).margin(1e-12));
}

TEST_CASE("zero layers leaves the uniform baseline") {
    auto q = build_vertex_cover_qubo(paw4(), 1.0, 2.0);
    auto t = paw_table();
    RunConfig cfg;
    cfg.n_layers = 0;
    cfg.mode = RunMode::postselect;
    auto res = run_amplification(q, t, cfg);
    CHECK(res.final_p_good == Catch::Approx(2.0 / 16.0).margin(1e-12));
}

TEST_CASE("trajectory mode beats the uniform baseline on the worked instance") {
    auto q = build_vertex_cover_qubo(paw4(), 1.0, 2.0);
    auto t = paw_table();
    RunConfig cfg;
    cfg.n_layers = 7;
    cfg.mode = RunMode::trajectory;
    cfg.shots = 2000;
    cfg.seed = 7;
    auto res = run_amplification(q, t, cfg);
    CHECK(res.final_p_good > 2.0 / 16.0);
    std::uint64_t total = 0;
    for (auto& [k, c] : res.samples) total += c;
    CHECK(total == 2000);
}

TEST_CASE("trajectory runs are deterministic given the seed") {
    auto q = build_vertex_cover_qubo(paw4(), 1.0, 2.0);
    auto t = paw_table();
    RunConfig cfg;
    cfg.n_layers = 5;
    cfg.mode = RunMode::trajectory;
    cfg.shots = 50;
    cfg.seed = 99;
    cfg.noise.depolarizing_1q = 0.01;
    cfg.noise.readout_flip = 0.05;
    auto a = run_amplification(q, t, cfg);
    auto b = run_amplification(q, t, cfg);
    CHECK(a.samples == b.samples);
    REQUIRE(a.traces.size() == b.traces.size());
    for (std::size_t i = 0; i < a.traces.size(); ++i) {
        CHECK(a.traces[i].p0 == b.traces[i].p0);
        CHECK(a.traces[i].outcome == b.traces[i].outcome);
    }
}

TEST_CASE("p_good over samples converges to the exact value") {
    auto t = paw_table();
    auto c = uniform_coeffs(4);
    const double exact = p_good(c, t);
    CHECK(exact == Catch::Approx(0.125).margin(1e-15));

    RngStream rng(3);
    std::map<std::uint64_t, std::uint64_t> samples;
    const int shots = 100000;
    for (int i = 0; i < shots; ++i) {
        double u = rng.uniform();
        std::uint64_t k = 0;
        for (; k < 15; ++k) {
            u -= std::norm(c[k]);
            if (u <= 0) break;
        }
        ++samples[k];
    }
    CHECK(std::abs(p_good(samples, t) - exact) < 0.01);

    std::vector<cdouble> pure(16, cdouble(0, 0));
    pure[t.ground_states[1]] = 1.0;
    CHECK(p_good(pure, t) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("parameter overrides are honored") {
    auto q = build_vertex_cover_qubo(paw4(), 1.0, 2.0);
    auto t = paw_table();
    RunConfig cfg;
    cfg.n_layers = 1;
    cfg.mode = RunMode::postselect;
    cfg.theta_override = 0.0;
    cfg.t_override = 0.0; // identity evolution: p0 must be exactly 1
    auto res = run_amplification(q, t, cfg);
    CHECK(res.traces[0].p0 == Catch::Approx(1.0).margin(1e-12));
    CHECK(res.final_p_good == Catch::Approx(2.0 / 16.0).margin(1e-12));
}
