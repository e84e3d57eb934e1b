#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "qamp/qaoa.hpp"
#include "qamp/qubo.hpp"

using namespace qamp;

namespace {

EnergyTable small_table() {
    Graph g{2, {{0, 1}}};
    auto q = build_vertex_cover_qubo(g, 1.0, 2.0);
    return build_energy_table(q, BoundsMode::exact);
}

// Dense-matrix route for the n=2 ansatz: build the 4x4 layer unitaries
// explicitly and apply them to the uniform start.
std::vector<cdouble> dense_qaoa_state(const EnergyTable& table, double gamma, double beta) {
    std::vector<cdouble> psi(4, cdouble(0.5, 0.0));
    // diagonal phase
    for (int k = 0; k < 4; ++k) psi[k] *= std::polar(1.0, -gamma * table.energies[k]);
    // Rx(beta) on qubit 0 then qubit 1, as explicit matrices
    const cdouble c = std::cos(0.5 * beta), s = cdouble(0, -std::sin(0.5 * beta));
    auto apply = [&](int qubit) {
        std::vector<cdouble> out(4, cdouble(0, 0));
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) {
                const int bit = 1 << qubit;
                if ((k & ~bit) != (j & ~bit)) continue;
                out[k] += ((k & bit) == (j & bit) ? c : s) * psi[j];
            }
        psi = out;
    };
    apply(0);
    apply(1);
    return psi;
}

} // namespace

TEST_CASE("zero angles give the uniform superposition") {
    auto t = small_table();
    auto psi = qaoa_state(t, {0.0, 0.0});
    for (auto& a : psi) CHECK(std::abs(a - cdouble(0.5, 0)) < 1e-15);
}

TEST_CASE("beta = pi at gamma = 0 is uniform up to global phase") {
    auto t = small_table();
    auto psi = qaoa_state(t, {0.0, std::numbers::pi});
    for (auto& a : psi) CHECK(std::abs(std::abs(a) - 0.5) < 1e-12);
}

TEST_CASE("p=1 ansatz matches the dense-matrix oracle at n=2") {
    auto t = small_table();
    RngStream rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const double gamma = rng.uniform(-2, 2), beta = rng.uniform(-2, 2);
        auto psi = qaoa_state(t, {gamma, beta});
        auto oracle = dense_qaoa_state(t, gamma, beta);
        for (int k = 0; k < 4; ++k) CHECK(std::abs(psi[k] - oracle[k]) < 1e-12);
    }
}

TEST_CASE("qaoa_state validates parameter count") {
    auto t = small_table();
    CHECK_THROWS_AS(qaoa_state(t, {}), std::invalid_argument);
    CHECK_THROWS_AS(qaoa_state(t, {0.1, 0.2, 0.3}), std::invalid_argument);
}

TEST_CASE("expectation stays within the spectrum") {
    auto t = small_table();
    RngStream rng(5);
    double emin = t.energies[0], emax = t.energies[0];
    for (double e : t.energies) {
        emin = std::min(emin, e);
        emax = std::max(emax, e);
    }
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> params{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3),
                                   rng.uniform(-3, 3)};
        const double e = expected_energy(qaoa_state(t, params), t);
        CHECK(e >= emin - 1e-12);
        CHECK(e <= emax + 1e-12);
    }
}

TEST_CASE("zero steps returns init params with empty history") {
    auto t = small_table();
    QaoaConfig cfg;
    cfg.depth = 2;
    cfg.optimizer_steps = 0;
    cfg.init_params = {0.1, 0.2, 0.3, 0.4};
    auto res = qaoa_optimize(t, cfg);
    CHECK(res.history.empty());
    CHECK(res.best_params == cfg.init_params);
    CHECK(res.total_shots == 0);
}

TEST_CASE("zero learning rate leaves parameters unchanged") {
    auto t = small_table();
    QaoaConfig cfg;
    cfg.depth = 1;
    cfg.optimizer_steps = 5;
    cfg.learning_rate = 0.0;
    cfg.init_params = {0.05, -0.02};
    auto res = qaoa_optimize(t, cfg);
    CHECK(res.best_params == cfg.init_params);
    CHECK(res.history.size() == 5);
}

TEST_CASE("exact-mode optimization lowers the energy and is deterministic") {
    auto t = small_table();
    QaoaConfig cfg;
    cfg.depth = 2;
    cfg.optimizer_steps = 30;
    cfg.seed = 11;
    auto a = qaoa_optimize(t, cfg);
    auto b = qaoa_optimize(t, cfg);
    CHECK(a.best_params == b.best_params);
    const double start = expected_energy(
        qaoa_state(t, std::vector<double>(4, 0.0)), t); // uniform-state energy
    CHECK(a.history.back().energy < start);
    CHECK(a.total_shots == 30ull * 1024ull);
}

TEST_CASE("sampled optimization is deterministic given the seed") {
    auto t = small_table();
    QaoaConfig cfg;
    cfg.depth = 1;
    cfg.optimizer_steps = 5;
    cfg.shots_per_step = 64;
    cfg.exact_expectation = false;
    cfg.seed = 17;
    auto a = qaoa_optimize(t, cfg);
    auto b = qaoa_optimize(t, cfg);
    CHECK(a.best_params == b.best_params);
    for (std::size_t i = 0; i < a.history.size(); ++i)
        CHECK(a.history[i].energy == b.history[i].energy);
}

TEST_CASE("shot ledger records w*l and per-step cumulative counts") {
    auto t = small_table();
    QaoaConfig cfg;
    cfg.depth = 1;
    cfg.optimizer_steps = 7;
    cfg.shots_per_step = 128;
    auto res = qaoa_optimize(t, cfg);
    CHECK(res.total_shots == 7ull * 128ull);
    for (std::size_t i = 0; i < res.history.size(); ++i)
        CHECK(res.history[i].cumulative_shots == (i + 1) * 128ull);
}
