#include <doctest.h>

#include <gradcode/constructions.hpp>
#include <gradcode/errors.hpp>
#include <gradcode/sim.hpp>

#include <cmath>

using namespace gradcode;

namespace {

DelayModel paper_model() {
    DelayModel m;
    m.family = Pareto{0.001, 1.1};
    m.scaling = Scaling::data_dependent;
    m.delta = 5e-7;
    return m;
}

SimConfig small_config(GcScheme scheme) {
    SimConfig cfg;
    cfg.scheme = std::move(scheme);
    cfg.model = paper_model();
    cfg.data.points = 700;
    cfg.data.dim = 6;
    cfg.data.task = Task::least_squares;
    cfg.data.heldout = 100;
    cfg.step = 1e-4;
    cfg.iterations = 40;
    cfg.persistence_block = 10;
    cfg.seed = 2024;
    return cfg;
}

}  // namespace

TEST_CASE("identical config and seed give a bit-identical trace") {
    auto cfg = small_config(build_cyclic1(7, Rat(6, 7), 3));
    auto a = run_sim(cfg);
    auto b = run_sim(cfg);
    CHECK(trace_csv(a) == trace_csv(b));
    auto c = [&] {
        auto cfg2 = cfg;
        cfg2.seed = 2025;
        return run_sim(cfg2);
    }();
    CHECK(trace_csv(a) != trace_csv(c));
}

TEST_CASE("wall clock accumulates the order statistic") {
    auto cfg = small_config(build_uncoded_forget_s(7, 2));
    auto trace = run_sim(cfg);
    double prev = 0;
    for (const auto& rec : trace.records) {
        CHECK(rec.wall_clock > prev);
        prev = rec.wall_clock;
    }
}

TEST_CASE("cgc recovers every partition each round") {
    auto cfg = small_config(build_cgc_full(7, 3));
    auto trace = run_sim(cfg);
    for (const auto& rec : trace.records) CHECK(rec.recovered == 7);
    for (long long hits : trace.partition_hits) CHECK(hits == 40);
}

TEST_CASE("forget-s recovers exactly n-s each round") {
    auto cfg = small_config(build_uncoded_forget_s(7, 2));
    auto trace = run_sim(cfg);
    for (const auto& rec : trace.records) CHECK(rec.recovered == 5);
}

TEST_CASE("convex least-squares run has monotone loss at s = 0") {
    auto scheme = build_cgc_full(10, 0);
    auto cfg = small_config(scheme);
    cfg.data.points = 1000;
    cfg.iterations = 100;
    auto data = make_dataset(cfg.data, cfg.seed);
    cfg.step = 0.9 / lipschitz_bound(data);
    auto trace = run_sim(cfg);
    double prev = training_loss(data, std::vector<double>(cfg.data.dim, 0.0));
    for (const auto& rec : trace.records) {
        CHECK(rec.loss <= prev + 1e-12);
        prev = rec.loss;
    }
}

TEST_CASE("certificate application equals the direct recovered sum") {
    auto g = build_cyclic2(9, Rat(7, 9), 4);
    DatasetSpec spec;
    spec.points = 900;
    spec.dim = 5;
    auto data = make_dataset(spec, 11);
    std::vector<double> beta(spec.dim, 0.3);
    auto grads = partition_gradients(data, g.params.k, beta);
    auto cert = decode(g, {1, 3, 4, 8});
    auto via_cert = apply_certificate(g, cert, grads, spec.dim);
    auto direct = direct_recovered_sum(cert, grads, spec.dim);
    for (int j = 0; j < spec.dim; ++j) {
        double denom = std::max(1.0, std::abs(direct[j]));
        CHECK(std::abs(via_cert[j] - direct[j]) / denom < 1e-10);
    }
}

TEST_CASE("comparison shares the raw delay draws across schemes") {
    CompareConfig cfg;
    cfg.entries.push_back({"forget-s", build_uncoded_forget_s(10, 2), -1.0});
    cfg.entries.push_back({"cgc", build_cgc_full(10, 2), -1.0});
    cfg.model = paper_model();
    cfg.model.delta = 0.0;  // completion time reduces to the shared raw draw
    cfg.data.points = 1000;
    cfg.data.dim = 4;
    cfg.iterations = 12;
    cfg.persistence_block = 4;
    cfg.seed = 99;
    auto traces = run_comparison(cfg);
    REQUIRE(traces.size() == 2);
    // With delta = 0 and data-dependent scaling, iteration time is the
    // (n-s)-th raw draw for both schemes: identical wall clocks.
    for (size_t i = 0; i < traces[0].records.size(); ++i)
        CHECK(traces[0].records[i].wall_clock ==
              doctest::Approx(traces[1].records[i].wall_clock).epsilon(1e-15));
}

TEST_CASE("comparison applies per-scheme delta overrides") {
    CompareConfig cfg;
    cfg.entries.push_back({"a", build_uncoded_forget_s(10, 2), -1.0});
    cfg.entries.push_back({"b", build_uncoded_forget_s(10, 2), 0.5});
    cfg.model = paper_model();
    cfg.model.delta = 0.0;
    cfg.data.points = 1000;
    cfg.data.dim = 4;
    cfg.iterations = 3;
    cfg.seed = 5;
    auto traces = run_comparison(cfg);
    // Each worker computes 100 points; the override adds 100*0.5 per round.
    for (size_t i = 0; i < traces[0].records.size(); ++i) {
        double base = traces[0].records[i].wall_clock;
        double slow = traces[1].records[i].wall_clock;
        CHECK(slow - base == doctest::Approx(50.0 * (i + 1)).epsilon(1e-9));
    }
}

TEST_CASE("forced consecutive stragglers still meet the cyclic target") {
    auto cfg = small_config(build_cyclic1(7, Rat(6, 7), 3));
    cfg.pattern.kind = StragglerPattern::Kind::consecutive;
    auto trace = run_sim(cfg);
    for (const auto& rec : trace.records) CHECK(rec.recovered >= 6);
}

TEST_CASE("empty custom pattern equals the default slowest-s rule") {
    auto cfg = small_config(build_cyclic1(7, Rat(6, 7), 3));
    auto base = run_sim(cfg);
    cfg.pattern.kind = StragglerPattern::Kind::custom;
    cfg.pattern.forced = {};
    auto same = run_sim(cfg);
    CHECK(trace_csv(base) == trace_csv(same));
}

TEST_CASE("custom pattern reproduces the decode certificate") {
    auto g = build_cyclic2(9, Rat(7, 9), 4);
    auto cfg = small_config(g);
    cfg.data.points = 900;
    cfg.pattern.kind = StragglerPattern::Kind::custom;
    cfg.pattern.forced = {1, 3, 4};  // workers 2, 4, 5; slowest fills the 4th slot
    auto trace = run_sim(cfg);
    for (const auto& rec : trace.records) CHECK(rec.recovered == 7);
}

TEST_CASE("oversized pattern is rejected") {
    auto cfg = small_config(build_cyclic1(7, Rat(6, 7), 3));
    cfg.pattern.kind = StragglerPattern::Kind::custom;
    cfg.pattern.forced = {0, 1, 2, 3};
    CHECK_THROWS_AS(run_sim(cfg), ConfigError);
}

TEST_CASE("dataset size must divide into partitions") {
    auto cfg = small_config(build_cyclic1(7, Rat(6, 7), 3));
    cfg.data.points = 705;  // not a multiple of 7
    CHECK_THROWS_AS(run_sim(cfg), ConfigError);
}

TEST_CASE("logistic task tracks held-out accuracy") {
    SimConfig cfg = small_config(build_cgc_full(10, 0));
    cfg.data.task = Task::logistic;
    cfg.data.points = 1000;
    cfg.data.noise = 0.8;
    cfg.step = 5e-3;
    cfg.iterations = 60;
    auto trace = run_sim(cfg);
    double final_acc = trace.records.back().accuracy;
    CHECK(final_acc > 0.85);  // two well-separated Gaussians
    CHECK(std::isnan(run_sim(small_config(build_cgc_full(10, 0))).records.back().accuracy));
}

TEST_CASE("frc shortfall is recorded in the trace") {
    auto g = build_frc(8, 2);
    auto cfg = small_config(g);
    cfg.data.points = 800;
    cfg.pattern.kind = StragglerPattern::Kind::custom;
    cfg.pattern.forced = {0, 1};  // both replicas of cell 0
    auto trace = run_sim(cfg);
    for (const auto& rec : trace.records) {
        CHECK(rec.recovered == 6);
        CHECK(rec.shortfall);
    }
}

TEST_CASE("trace csv shape") {
    auto cfg = small_config(build_uncoded_forget_s(7, 2));
    cfg.iterations = 2;
    auto csv = trace_csv(run_sim(cfg));
    CHECK(csv.substr(0, 42) == "iter,wall_clock,recovered,loss,accuracy\n1,");
}

TEST_CASE("normalization flag rescales the update") {
    auto cfg = small_config(build_uncoded_forget_s(10, 2));
    cfg.data.points = 1000;
    cfg.iterations = 5;
    auto plain = run_sim(cfg);
    cfg.normalize_by_recovered = true;
    cfg.step = cfg.step * 8;  // 1/|I| = 1/8 restores the effective step
    auto scaled = run_sim(cfg);
    for (size_t i = 0; i < plain.records.size(); ++i)
        CHECK(plain.records[i].loss == doctest::Approx(scaled.records[i].loss).epsilon(1e-12));
}
