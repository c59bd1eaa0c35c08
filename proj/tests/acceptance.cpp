// Acceptance suite: one line per criterion, [PASS]/[FAIL] with timing.
// Exits nonzero if any criterion fails.

#include <gradcode/constructions.hpp>
#include <gradcode/decode.hpp>
#include <gradcode/delay.hpp>
#include <gradcode/feasibility.hpp>
#include <gradcode/rng.hpp>
#include <gradcode/scheme.hpp>
#include <gradcode/sim.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

using namespace gradcode;

namespace {

int failures = 0;

void criterion(const std::string& name, const std::function<void(std::ostringstream&)>& body) {
    std::ostringstream detail;
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    try {
        body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail << " exception: " << e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    if (!ok) ++failures;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << " (" << ms << " ms)" << detail.str()
              << "\n";
}

struct Expect {
    std::ostringstream& out;
    void operator()(bool cond, const std::string& what) {
        if (!cond) {
            out << " | failed: " << what;
            throw std::runtime_error("expectation failed");
        }
    }
};

std::vector<std::vector<int>> subsets_of_size(int n, int s) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(s);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        out.push_back(cur);
        int i = s - 1;
        while (i >= 0 && cur[i] == n - s + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < s; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

// Assignment cells from the renderer output: '1'/'*' = assigned, '.' = not.
// Cells start after the worker-label column.
std::vector<std::string> render_grid(const GcScheme& g) {
    std::istringstream in(render(g));
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        std::string cells;
        for (size_t i = line.find(' '); i < line.size(); ++i) {
            char c = line[i];
            if (c == '1' || c == '*')
                cells.push_back('1');
            else if (c == '.')
                cells.push_back('.');
        }
        rows.push_back(cells);
    }
    return rows;
}

GcScheme cyclic_sum_scheme(int n, int span, const Rat& alpha, int s) {
    GcScheme g;
    g.family = Family::cyclic1;
    g.params = {n, n, alpha, s};
    g.assignment.resize(n);
    g.rows.resize(n);
    for (int w = 0; w < n; ++w) {
        std::vector<int> a(span);
        for (int t = 0; t < span; ++t) a[t] = (w + t) % n;
        std::sort(a.begin(), a.end());
        g.assignment[w] = a;
        Row row;
        for (int p : a) row.push_back({p, 1});
        g.rows[w] = {row};
    }
    return g;
}

std::vector<GcScheme> reference_schemes() {
    return {
        build_cyclic1(7, Rat(6, 7), 3),
        build_cyclic2(9, Rat(7, 9), 4),
        build_combinatorial(7, Rat(6, 7), 3, 2),
        build_balanced(5, Rat(7, 10), 3, 2),
        build_from_tdesign(hadamard_3_8_4_1()),
        build_intermediate(5, Rat(13, 15), 3, IntermediateParams::with_defaults(2, 3)),
        build_uncoded_forget_s(5, 2),
        build_cgc_full(7, 3),
    };
}

double mc_os(const DelayModel& m, int n, int s, long long trials, std::uint64_t seed) {
    StreamRng rng{seed, 23};
    std::vector<double> xs(n);
    double acc = 0;
    for (long long t = 0; t < trials; ++t) {
        for (int i = 0; i < n; ++i) xs[i] = sample_delay(m, rng.next_u01());
        std::nth_element(xs.begin(), xs.begin() + (n - s - 1), xs.end());
        acc += xs[n - s - 1];
    }
    return acc / trials;
}

}  // namespace

int main() {
    criterion("criterion 1: communication/computation table reproduction", [](auto& out) {
        Expect expect{out};
        auto c7 = load_report(build_cyclic1(7, Rat(6, 7), 3));
        expect(c7.m == 1 && c7.l == Rat(3, 7), "cyclic (7,6/7,3) -> (1, 3/7)");
        auto b7 = load_report(build_combinatorial(7, Rat(6, 7), 3, 2));
        expect(b7.m == 6 && b7.l == Rat(2, 7), "combinatorial (7,6/7,3) -> (6, 2/7)");
        expect(naive_load_bound(7, Rat(6, 7), 3) == Rat(24, 49), "naive bound 24/49");
        auto c9 = load_report(build_cyclic2(9, Rat(7, 9), 4));
        expect(c9.m == 2 && c9.l == Rat(3, 9), "cyclic (9,7/9,4) -> (2, 3/9)");
        auto b9 = load_report(build_combinatorial(9, Rat(7, 9), 4, 2));
        expect(b9.m == 8 && b9.l == Rat(2, 9), "combinatorial (9,7/9,4) -> (8, 2/9)");
        expect(naive_load_bound(9, Rat(7, 9), 4) == Rat(35, 81), "naive bound 35/81");
    });

    criterion("criterion 2: assignment-table fidelity", [](auto& out) {
        Expect expect{out};
        IntermediateParams ip;
        ip.y = 2;
        ip.delta = 3;
        ip.gammas = {1, 2};
        auto inter = render_grid(build_intermediate(5, Rat(13, 15), 3, ip));
        const std::vector<std::string> inter_expect = {
            "111..1.1111.1..", "1..111..1.1111.", "11.1..111..1.11",
            ".1111.1..111..1", "..1.1111.1..111"};
        expect(inter == inter_expect, "15-partition interpolating table");

        auto td = render_grid(build_from_tdesign(hadamard_3_8_4_1()));
        const std::vector<std::string> td_expect = {
            "1.1.1.1.1.1.1.", "1..1.11.1..1.1", ".11..11..11..1", ".1.11.1..1.11.",
            "1.1.1..1.1.1.1", "1..1.1.1.11.1.", ".11..1.11..11.", ".1.11..11.1..1"};
        expect(td == td_expect, "Hadamard design table");

        auto bal = render_grid(build_balanced(5, Rat(7, 10), 3, 2));
        const std::vector<std::string> bal_expect = {
            "1111......", "1...111...", ".1..1..11.", "..1..1.1.1", "...1..1.11"};
        expect(bal == bal_expect, "balanced 5-worker assignment cells");
    });

    criterion("criterion 3: exhaustive feasibility + decoder completeness", [](auto& out) {
        Expect expect{out};
        for (const auto& g : reference_schemes()) {
            auto v = oracle_feasible(g, g.params.alpha, g.params.s, OracleMode::exhaustive);
            expect(v.feasible, std::string(family_name(g.family)) + " oracle feasible");
            int target = g.params.target();
            for (const auto& set : subsets_of_size(g.params.n, g.params.s)) {
                auto cert = decode(g, set);
                expect(verify_certificate(g, cert),
                       std::string(family_name(g.family)) + " certificate sound");
                expect(static_cast<int>(cert.recovered.size()) >= target,
                       std::string(family_name(g.family)) + " recovery target");
            }
        }
    });

    criterion("criterion 4: impossibility instances refuted by the oracle", [](auto& out) {
        Expect expect{out};
        auto indivisible = cyclic_sum_scheme(9, 3, Rat(7, 9), 4);
        auto v1 = oracle_feasible(indivisible, Rat(7, 9), 4, OracleMode::exhaustive);
        expect(!v1.feasible, "no (7/9,4)-feasible one-message cyclic (9,9,1,3/9)");
        expect(!v1.worst_set.empty() && v1.worst_recoverable < 7, "counterexample witness");

        auto beta_odd = cyclic_sum_scheme(9, 2, Rat(7, 9), 3);
        auto v2 = oracle_feasible(beta_odd, Rat(7, 9), 3, OracleMode::exhaustive);
        expect(!v2.feasible, "beta=7 odd, l=2/9, m=1 infeasible at s=n-beta+1");
        auto pred = impossibility_predicates(9, Rat(7, 9), 3, 1, Rat(2, 9));
        expect(pred.rule_beta_odd && pred.ruled_out, "predicate flags the odd-beta rule");
    });

    criterion("criterion 5: stopping-straggler fixtures", [](auto& out) {
        Expect expect{out};
        auto to0 = [](std::vector<int> v) {
            for (auto& x : v) --x;
            return v;
        };
        expect(stopping_straggler(15, 5, to0({4, 8, 10, 11, 12, 13, 15})) == 11,
               "first fixture returns worker 12");
        expect(stopping_straggler(15, 5, to0({5, 6, 7, 8, 9, 13, 14})) == 7,
               "second fixture returns worker 8");
        auto g = build_cyclic1(18, Rat(15, 18), 7);
        auto workers_of = [&](const RecoveryCertificate& cert) {
            std::set<int> w;
            for (const auto& c : cert.combo) w.insert(c.worker + 1);
            return std::vector<int>(w.begin(), w.end());
        };
        auto c1 = decode_cyclic1(g, to0({4, 8, 10, 11, 12, 13, 15}));
        expect(workers_of(c1) == std::vector<int>{2, 7, 14}, "first fixture workers {2,7,14}");
        auto c2 = decode_cyclic1(g, to0({5, 6, 7, 8, 9, 13, 14}));
        expect(workers_of(c2) == std::vector<int>{3, 10, 15}, "second fixture workers {3,10,15}");
    });

    criterion("criterion 6: delta* sweep values and monotonicity", [](auto& out) {
        Expect expect{out};
        Rat alpha(87, 100);
        expect(delta_star(19, 10, alpha, 1) == 9, "delta*(1) = 9");
        expect(delta_star(19, 10, alpha, 2) == 6, "delta*(2) = 6");
        expect(delta_star(19, 10, alpha, 3) == 3, "delta*(3) = 3");
        StreamRng rng{987654321, 11};
        for (int trial = 0; trial < 100; ++trial) {
            int n = 5 + static_cast<int>(rng.next() % 40);
            int s = 2 + static_cast<int>(rng.next() % (n - 2));
            Rat a(50 + static_cast<long long>(rng.next() % 49), 100);
            auto prev = delta_star(n, s, a, 1);
            for (int y = 2; y <= 5 && prev && *prev > y - 1; ++y) {
                auto cur = delta_star(n, s, a, y);
                if (cur)
                    expect(*cur <= *prev, "delta* non-increasing before the combinatorial point");
                prev = cur;
            }
        }
    });

    criterion("criterion 7: lower-bound consistency and equality cases", [](auto& out) {
        Expect expect{out};
        for (const auto& g : reference_schemes())
            expect(check_scheme_bound(g),
                   std::string(family_name(g.family)) + " satisfies the load bound");
        expect(Rat(binomial(3, 2), binomial(7, 2)) == 1 - Rat(6, 7),
               "combinatorial (7,6/7,3,2) meets the bound with equality");
        expect(Rat(binomial(5, 4), binomial(8, 4)) == 1 - Rat(13, 14),
               "design scheme meets the bound with equality");
    });

    criterion("criterion 8: delay closed forms vs Monte Carlo", [](auto& out) {
        Expect expect{out};
        DelayModel sexp;
        sexp.family = ShiftedExp{1.0, 2.0};
        for (auto [n, s] : {std::pair{50, 10}, std::pair{100, 19}}) {
            double closed = expected_order_stat(sexp, n, s);
            double mc = mc_os(sexp, n, s, 100'000, 101);
            out << " sexp(" << n << "," << s << ") gap "
                << std::abs(closed - mc) / closed << ";";
            expect(std::abs(closed - mc) / closed < 0.01, "shifted-exp within 1%");
        }
        DelayModel pareto;
        pareto.family = Pareto{0.001, 1.5};
        for (auto [n, s] : {std::pair{50, 10}, std::pair{100, 19}}) {
            double closed = expected_order_stat(pareto, n, s);
            double mc = mc_os(pareto, n, s, 1'000'000, 202);
            out << " pareto(" << n << "," << s << ") gap "
                << std::abs(closed - mc) / closed << ";";
            expect(std::abs(closed - mc) / closed < 0.05, "pareto within 5%");
        }
    });

    criterion("criterion 9: binomial convexity property", [](auto& out) {
        Expect expect{out};
        StreamRng rng{13579, 4};
        for (int trial = 0; trial < 1000; ++trial) {
            int t = 1 + static_cast<int>(rng.next() % 12);
            std::vector<int> as(t);
            for (auto& a : as) a = 1 + static_cast<int>(rng.next() % 15);
            int r = static_cast<int>(rng.next() % 8);
            expect(binomial_convexity(as, r), "random integer list satisfies the inequality");
        }
    });

    criterion("criterion 10a: simulation determinism", [](auto& out) {
        Expect expect{out};
        SimConfig cfg;
        cfg.scheme = build_cyclic1(7, Rat(6, 7), 3);
        cfg.model.family = Pareto{0.001, 1.1};
        cfg.model.scaling = Scaling::data_dependent;
        cfg.model.delta = 5e-7;
        cfg.data.points = 700;
        cfg.data.dim = 6;
        cfg.step = 1e-5;
        cfg.iterations = 60;
        cfg.persistence_block = 20;
        cfg.seed = 42;
        expect(trace_csv(run_sim(cfg)) == trace_csv(run_sim(cfg)), "bit-identical traces");
    });

    criterion("criterion 10b: common random numbers across schemes", [](auto& out) {
        Expect expect{out};
        CompareConfig cfg;
        cfg.entries.push_back({"forget-s", build_uncoded_forget_s(100, 19), -1.0});
        cfg.entries.push_back({"cgc", build_cgc_full(100, 19), -1.0});
        cfg.model.family = Pareto{0.001, 1.1};
        cfg.model.scaling = Scaling::data_dependent;
        cfg.model.delta = 0.0;  // completion = the shared raw draw
        cfg.data.points = 2000;
        cfg.data.dim = 4;
        cfg.step = 1e-6;
        cfg.iterations = 30;
        cfg.persistence_block = 10;
        cfg.seed = 7;
        auto traces = run_comparison(cfg);
        for (size_t i = 0; i < traces[0].records.size(); ++i) {
            double a = traces[0].records[i].wall_clock, b = traces[1].records[i].wall_clock;
            expect(std::abs(a - b) <= 1e-15 * std::max(a, b),
                   "identical per-worker draws give identical waiting times");
        }
    });

    criterion("criterion 10c: convex-task monotone loss at s = 0", [](auto& out) {
        Expect expect{out};
        SimConfig cfg;
        cfg.scheme = build_cgc_full(20, 0);
        cfg.model.family = Pareto{0.001, 1.1};
        cfg.model.scaling = Scaling::data_dependent;
        cfg.model.delta = 5e-7;
        cfg.data.points = 1000;
        cfg.data.dim = 8;
        cfg.data.task = Task::least_squares;
        cfg.iterations = 100;
        cfg.seed = 17;
        auto data = make_dataset(cfg.data, cfg.seed);
        cfg.step = 0.9 / lipschitz_bound(data);
        auto trace = run_sim(cfg);
        double prev = training_loss(data, std::vector<double>(cfg.data.dim, 0.0));
        for (const auto& rec : trace.records) {
            expect(rec.loss <= prev + 1e-12, "loss non-increasing");
            prev = rec.loss;
        }
    });

    criterion("criterion 10d: consecutive stragglers, FRC below cyclic (directional)",
              [](auto& out) {
                  Expect expect{out};
                  CompareConfig cfg;
                  cfg.entries.push_back({"frc", build_frc(100, 19), -1.0});
                  cfg.entries.push_back({"cyclic1", build_cyclic1(100, Rat(82, 100), 19), -1.0});
                  cfg.model.family = Pareto{0.001, 1.1};
                  cfg.model.scaling = Scaling::data_dependent;
                  cfg.model.delta = 5e-7;
                  cfg.data.points = 2000;
                  cfg.data.dim = 4;
                  cfg.step = 1e-6;
                  cfg.iterations = 300;
                  cfg.persistence_block = 300;
                  cfg.seed = 23;
                  cfg.pattern.kind = StragglerPattern::Kind::consecutive;
                  auto traces = run_comparison(cfg);
                  auto mean_fraction = [&](const SimTrace& t, int k) {
                      double acc = 0;
                      for (const auto& r : t.records) acc += static_cast<double>(r.recovered) / k;
                      return acc / t.records.size();
                  };
                  double frc = mean_fraction(traces[0], 100);
                  double cyc = mean_fraction(traces[1], 100);
                  out << " mean recovered fraction: frc " << frc << " vs cyclic " << cyc << ";";
                  expect(frc < cyc, "frc strictly below cyclic under forced consecutive stragglers");
              });

    criterion("criterion 10e: recovery target met every round (non-FRC bundle)", [](auto& out) {
        Expect expect{out};
        CompareConfig cfg;
        cfg.entries.push_back({"forget-s", build_uncoded_forget_s(100, 19), 1e-4});
        cfg.entries.push_back({"cyclic1", build_cyclic1(100, Rat(82, 100), 19), -1.0});
        cfg.entries.push_back({"cgc", build_cgc_full(100, 19), 2e-3});
        cfg.model.family = Pareto{0.001, 1.1};
        cfg.model.scaling = Scaling::data_dependent;
        cfg.model.delta = 5e-7;
        cfg.data.points = 2000;
        cfg.data.dim = 4;
        cfg.step = 1e-6;
        cfg.iterations = 300;
        cfg.persistence_block = 300;
        cfg.seed = 29;
        auto traces = run_comparison(cfg);
        for (size_t i = 0; i < cfg.entries.size(); ++i) {
            int target = cfg.entries[i].scheme.params.target();
            for (const auto& rec : traces[i].records)
                expect(rec.recovered >= target,
                       cfg.entries[i].name + " meets ceil(alpha*k) every round");
        }
    });

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                                : "FAILURES: " + std::to_string(failures))
              << "\n";
    return failures == 0 ? 0 : 1;
}
