// Command-line front end: construct / render / verify / bound / sweep-delta /
// delay / simulate / compare. Results go to stdout as JSON or CSV; diagnostics
// go to stderr. Exit codes: 2 construction/model infeasible, 3 instance too
// large for the exhaustive oracle, 4 bad configuration.

#include <gradcode/constructions.hpp>
#include <gradcode/decode.hpp>
#include <gradcode/delay.hpp>
#include <gradcode/errors.hpp>
#include <gradcode/feasibility.hpp>
#include <gradcode/rng.hpp>
#include <gradcode/scheme.hpp>
#include <gradcode/sim.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

using namespace gradcode;

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("GRADCODE_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw ConfigError("GRADCODE_SEED is not an integer");
        }
    }
    return 1;
}

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& item : split(text, ',')) out.push_back(std::stoi(item));
    return out;
}

TDesign load_design(const std::string& name) {
    if (name == "hadamard-3-8-4-1") return hadamard_3_8_4_1();
    return design_from_text(slurp(name));
}

struct ConstructArgs {
    std::string family;
    int n = 0, s = 0, y = 2, delta = 0;
    std::string alpha, gammas, design, out;
};

GcScheme construct_scheme(const ConstructArgs& a) {
    Family fam = family_from_name(a.family);
    auto alpha = [&] {
        if (a.alpha.empty()) throw ConfigError("--alpha is required for this family");
        return parse_rational(a.alpha);
    };
    switch (fam) {
        case Family::cyclic1:
            return build_cyclic1(a.n, alpha(), a.s);
        case Family::cyclic2:
            return build_cyclic2(a.n, alpha(), a.s);
        case Family::combinatorial:
            return build_combinatorial(a.n, alpha(), a.s, a.y);
        case Family::balanced:
            return build_balanced(a.n, alpha(), a.s, a.y);
        case Family::tdesign: {
            if (a.design.empty()) throw ConfigError("--design is required for tdesign");
            return build_from_tdesign(load_design(a.design));
        }
        case Family::intermediate: {
            Rat al = alpha();
            int delta = a.delta;
            if (delta <= 0) {
                auto ds = delta_star(a.n, a.s, al, a.y);
                if (!ds)
                    throw ConstructionInfeasible("no delta in [y, s] is feasible for y=" +
                                                 std::to_string(a.y));
                delta = *ds;
            }
            IntermediateParams ip = IntermediateParams::with_defaults(a.y, delta);
            if (!a.gammas.empty()) ip.gammas = parse_int_list(a.gammas);
            return build_intermediate(a.n, al, a.s, ip);
        }
        case Family::uncoded:
            return build_uncoded_forget_s(a.n, a.s);
        case Family::frc:
            return build_frc(a.n, a.s);
        case Family::cgc:
            return build_cgc_full(a.n, a.s);
    }
    throw ConfigError("unknown family");
}

nlohmann::json verdict_json(const FeasibilityVerdict& v) {
    nlohmann::json j;
    j["feasible"] = v.feasible;
    j["alpha"] = rat_str(v.alpha);
    j["s"] = v.s;
    j["mode"] = v.sampled ? "sampled" : "exhaustive";
    j["sampled"] = v.sampled;
    j["sets_checked"] = v.sets_checked;
    j["worst_recoverable"] = v.worst_recoverable;
    j["worst_alpha"] = rat_str(v.worst_alpha);
    auto ws = nlohmann::json::array();
    for (int w : v.worst_set) ws.push_back(w + 1);
    j["worst_set"] = std::move(ws);
    return j;
}

// compare tokens: name[:part]* where a part is either k=v or a bare alpha,
// e.g. "cyclic1:.82", "combinatorial:y=2", "intermediate:y=2:delta=6".
struct SchemeToken {
    std::string name;
    std::string alpha;
    std::map<std::string, std::string> kv;
};

SchemeToken parse_token(const std::string& text) {
    SchemeToken tok;
    auto parts = split(text, ':');
    if (parts.empty()) throw ConfigError("empty scheme token");
    tok.name = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) {
        auto eq = parts[i].find('=');
        if (eq == std::string::npos)
            tok.alpha = parts[i];
        else
            tok.kv[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
    }
    return tok;
}

int max_feasible_s(const std::string& family, int n, const Rat& alpha, int y) {
    for (int s = n - 1; s >= 1; --s) {
        try {
            if (family == "cyclic1")
                build_cyclic1(n, alpha, s);
            else if (family == "cyclic2")
                build_cyclic2(n, alpha, s);
            else if (family == "combinatorial" || family == "balanced") {
                if (Rat(binomial(s, y), binomial(n, y)) > 1 - alpha) continue;
            } else if (family == "intermediate") {
                if (!delta_star(n, s, alpha, y)) continue;
            }
            return s;
        } catch (const ConstructionInfeasible&) {
            continue;
        }
    }
    throw ConstructionInfeasible("no straggler tolerance works for " + family +
                                 " at the shared alpha");
}

CompareEntry build_entry(const SchemeToken& tok, const std::string& mode, int n, int shared_s,
                         const std::string& shared_alpha) {
    auto alpha_of = [&]() -> Rat {
        if (!tok.alpha.empty()) return parse_rational(tok.alpha);
        if (tok.kv.count("alpha")) return parse_rational(tok.kv.at("alpha"));
        if (!shared_alpha.empty()) return parse_rational(shared_alpha);
        throw ConfigError("scheme '" + tok.name + "' needs an alpha (name:alpha)");
    };
    int y = tok.kv.count("y") ? std::stoi(tok.kv.at("y")) : 2;
    CompareEntry entry;
    entry.name = tok.name;
    const bool fixed_s = mode == "fixed-s";
    std::string fam = tok.name == "forget-s" ? "uncoded" : tok.name;
    int s = shared_s;
    if (!fixed_s && tok.kv.count("s")) {
        s = std::stoi(tok.kv.at("s"));
    } else if (!fixed_s) {
        if (fam == "uncoded") {
            SchemeParams p{n, n, alpha_of(), 1};
            s = n - p.beta();
        } else if (fam == "frc" || fam == "cgc") {
            throw ConfigError("'" + tok.name + "' has no alpha knob; use fixed-s mode");
        } else {
            s = max_feasible_s(fam, n, alpha_of(), y);
        }
    }
    if (fam == "uncoded")
        entry.scheme = build_uncoded_forget_s(n, s);
    else if (fam == "frc")
        entry.scheme = build_frc(n, s);
    else if (fam == "cgc")
        entry.scheme = build_cgc_full(n, s);
    else if (fam == "cyclic1")
        entry.scheme = build_cyclic1(n, alpha_of(), s);
    else if (fam == "cyclic2")
        entry.scheme = build_cyclic2(n, alpha_of(), s);
    else if (fam == "combinatorial")
        entry.scheme = build_combinatorial(n, alpha_of(), s, y);
    else if (fam == "balanced")
        entry.scheme = build_balanced(n, alpha_of(), s, y);
    else if (fam == "intermediate") {
        Rat alpha = alpha_of();
        int delta;
        if (tok.kv.count("delta")) {
            delta = std::stoi(tok.kv.at("delta"));
        } else {
            auto ds = delta_star(n, s, alpha, y);
            if (!ds)
                throw ConstructionInfeasible("intermediate: no feasible delta at y=" +
                                             std::to_string(y));
            delta = *ds;
        }
        entry.scheme =
            build_intermediate(n, alpha, s, IntermediateParams::with_defaults(y, delta));
    } else {
        throw ConfigError("unknown scheme token '" + tok.name + "'");
    }
    return entry;
}

DelayModel default_model() {
    DelayModel m;
    m.family = Pareto{0.001, 1.1};
    m.scaling = Scaling::data_dependent;
    m.delta = 5e-7;
    return m;
}

StragglerPattern make_pattern(const std::string& kind, const std::string& forced) {
    StragglerPattern p;
    if (kind == "consecutive") {
        p.kind = StragglerPattern::Kind::consecutive;
    } else if (kind == "custom") {
        p.kind = StragglerPattern::Kind::custom;
        for (int w : parse_int_list(forced)) p.forced.push_back(w - 1);
    }
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gradient coding with partial recovery: constructions, decoding, "
                 "feasibility checks, delay models, and a master-worker SGD simulator"};
    app.require_subcommand(1);

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "build a scheme and print its JSON");
    construct->add_option("--family", ca.family, "scheme family")->required();
    construct->add_option("--n", ca.n, "worker count");
    construct->add_option("--alpha", ca.alpha, "recovery fraction p/q");
    construct->add_option("--s", ca.s, "straggler tolerance");
    construct->add_option("--y", ca.y, "replication (combinatorial/balanced/intermediate)");
    construct->add_option("--delta", ca.delta, "intermediate gap sum (default: smallest feasible)");
    construct->add_option("--gammas", ca.gammas, "comma-separated gap list");
    construct->add_option("--design", ca.design, "design file or 'hadamard-3-8-4-1'");
    construct->add_option("-o,--out", ca.out, "output file (default stdout)");

    std::string render_path;
    auto* render_cmd = app.add_subcommand("render", "print a scheme's assignment table");
    render_cmd->add_option("--scheme", render_path, "scheme JSON file or '-'")->required();

    std::string verify_path, verify_alpha, verify_mode = "exhaustive";
    int verify_s = -1;
    long long verify_samples = 10'000;
    std::uint64_t verify_seed = 0;
    bool verify_have_seed = false;
    auto* verify = app.add_subcommand("verify", "run the feasibility oracle on a scheme");
    verify->add_option("--scheme", verify_path, "scheme JSON file or '-'")->required();
    verify->add_option("--alpha", verify_alpha, "override the scheme's alpha");
    verify->add_option("--s", verify_s, "override the scheme's s");
    verify->add_option("--mode", verify_mode, "exhaustive|sampled")
        ->check(CLI::IsMember({"exhaustive", "sampled"}));
    verify->add_option("--samples", verify_samples, "sampled-mode straggler sets");
    verify->add_option("--seed", verify_seed, "sampled-mode seed")
        ->each([&](const std::string&) { verify_have_seed = true; });

    int bound_n = 0, bound_s = 0;
    std::string bound_alpha, bound_scheme;
    auto* bound = app.add_subcommand("bound", "replication lower bound for (n, s, alpha)");
    bound->add_option("--n", bound_n)->required();
    bound->add_option("--s", bound_s)->required();
    bound->add_option("--alpha", bound_alpha)->required();
    bound->add_option("--scheme", bound_scheme, "also check a scheme against the bound");

    int sw_n = 0, sw_s = 0, sw_ymax = 3;
    std::string sw_alpha;
    auto* sweep = app.add_subcommand("sweep-delta", "smallest feasible gap sum per y (CSV)");
    sweep->add_option("--n", sw_n)->required();
    sweep->add_option("--s", sw_s)->required();
    sweep->add_option("--alpha", sw_alpha)->required();
    sweep->add_option("--ymax", sw_ymax);

    std::string dl_family = "pareto", dl_scaling = "data";
    double dl_lambda = 0.001, dl_rho = 1.1, dl_gamma = 1.0, dl_w = 1.0, dl_delta = 0.0;
    double dl_points = 1.0, dl_compare_alpha = 0.0, dl_compare_points = 0.0;
    int dl_n = 0, dl_s = 0;
    long long dl_mc = 0;
    std::uint64_t dl_seed = 0;
    bool dl_have_seed = false;
    auto* delay_cmd = app.add_subcommand("delay", "closed-form expected iteration delay");
    delay_cmd->add_option("--family", dl_family)->check(CLI::IsMember({"pareto", "sexp"}));
    delay_cmd->add_option("--lambda", dl_lambda, "Pareto minimum");
    delay_cmd->add_option("--rho", dl_rho, "Pareto tail index");
    delay_cmd->add_option("--gamma", dl_gamma, "shifted-exp minimum");
    delay_cmd->add_option("--w", dl_w, "shifted-exp scale");
    delay_cmd->add_option("--scaling", dl_scaling)->check(CLI::IsMember({"data", "server"}));
    delay_cmd->add_option("--delta", dl_delta, "per-gradient time (data scaling)");
    delay_cmd->add_option("--n", dl_n)->required();
    delay_cmd->add_option("--s", dl_s)->required();
    delay_cmd->add_option("--points", dl_points, "gradients per worker");
    delay_cmd->add_option("--mc", dl_mc, "Monte-Carlo trials to cross-check");
    delay_cmd->add_option("--seed", dl_seed)->each([&](const std::string&) {
        dl_have_seed = true;
    });
    delay_cmd->add_option("--compare-alpha", dl_compare_alpha,
                          "also compare uncoded vs 2-replicated at this alpha");
    delay_cmd->add_option("--compare-points", dl_compare_points,
                          "dataset size d for the comparison");

    std::string sim_scheme_path, sim_model_path, sim_task = "ls", sim_pattern = "slowest";
    std::string sim_forced, sim_out;
    DatasetSpec sim_data;
    double sim_step = 2e-3, sim_delta_override = -1.0;
    int sim_iters = 100, sim_block = 300;
    std::uint64_t sim_seed = 0;
    bool sim_have_seed = false, sim_normalize = false;
    auto* simulate = app.add_subcommand("simulate", "run one scheme through the SGD simulator");
    simulate->add_option("--scheme", sim_scheme_path, "scheme JSON file or '-'")->required();
    simulate->add_option("--model", sim_model_path, "delay model JSON file");
    simulate->add_option("--task", sim_task)->check(CLI::IsMember({"ls", "logistic"}));
    simulate->add_option("--points", sim_data.points, "dataset size (multiple of k)");
    simulate->add_option("--dim", sim_data.dim, "feature dimension");
    simulate->add_option("--noise", sim_data.noise);
    simulate->add_option("--heldout", sim_data.heldout);
    simulate->add_option("--step", sim_step, "learning rate");
    simulate->add_option("--iters", sim_iters);
    simulate->add_option("--block", sim_block, "iterations per delay redraw");
    simulate->add_option("--seed", sim_seed)->each([&](const std::string&) {
        sim_have_seed = true;
    });
    simulate->add_flag("--normalize", sim_normalize, "scale updates by 1/|I|");
    simulate->add_option("--pattern", sim_pattern)
        ->check(CLI::IsMember({"slowest", "consecutive", "custom"}));
    simulate->add_option("--forced", sim_forced, "custom pattern, 1-based comma list");
    simulate->add_option("--delta-override", sim_delta_override, "per-scheme data delta");
    simulate->add_option("-o,--out", sim_out, "trace CSV file (default stdout)");

    std::string cp_mode = "fixed-s", cp_alpha, cp_schemes, cp_model_path, cp_outdir = ".";
    std::string cp_task = "ls", cp_pattern = "slowest", cp_forced;
    std::vector<std::string> cp_overrides;
    DatasetSpec cp_data;
    double cp_step = 2e-3;
    int cp_n = 0, cp_s = 0, cp_iters = 300, cp_block = 300;
    std::uint64_t cp_seed = 0;
    bool cp_have_seed = false;
    auto* compare = app.add_subcommand("compare", "run several schemes on shared delay draws");
    compare->add_option("--mode", cp_mode)->check(CLI::IsMember({"fixed-s", "fixed-alpha"}));
    compare->add_option("--n", cp_n)->required();
    compare->add_option("--s", cp_s, "shared straggler count (fixed-s)");
    compare->add_option("--alpha", cp_alpha, "shared recovery fraction (fixed-alpha)");
    compare->add_option("--schemes", cp_schemes, "comma list, e.g. forget-s,cyclic1:.82,frc,cgc")
        ->required();
    compare->add_option("--model", cp_model_path, "delay model JSON file");
    compare->add_option("--task", cp_task)->check(CLI::IsMember({"ls", "logistic"}));
    compare->add_option("--points", cp_data.points);
    compare->add_option("--dim", cp_data.dim);
    compare->add_option("--noise", cp_data.noise);
    compare->add_option("--step", cp_step);
    compare->add_option("--iters", cp_iters);
    compare->add_option("--block", cp_block);
    compare->add_option("--seed", cp_seed)->each([&](const std::string&) {
        cp_have_seed = true;
    });
    compare->add_option("--pattern", cp_pattern)
        ->check(CLI::IsMember({"slowest", "consecutive", "custom"}));
    compare->add_option("--forced", cp_forced, "custom pattern, 1-based comma list");
    compare->add_option("--delta-override", cp_overrides,
                        "name=delta, e.g. forget-s=1e-4 (repeatable)");
    compare->add_option("--outdir", cp_outdir, "directory for trace CSVs + manifest");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*construct) {
            spill(ca.out, to_json(construct_scheme(ca)));
        } else if (*render_cmd) {
            std::cout << render(scheme_from_json(slurp(render_path)));
        } else if (*verify) {
            GcScheme g = scheme_from_json(slurp(verify_path));
            Rat alpha = verify_alpha.empty() ? g.params.alpha : parse_rational(verify_alpha);
            int s = verify_s >= 0 ? verify_s : g.params.s;
            OracleOptions opts;
            opts.samples = verify_samples;
            opts.seed = verify_have_seed ? verify_seed : default_seed();
            auto mode = verify_mode == "sampled" ? OracleMode::sampled : OracleMode::exhaustive;
            std::cout << verdict_json(oracle_feasible(g, alpha, s, mode, opts)).dump(2) << "\n";
        } else if (*bound) {
            Rat alpha = parse_rational(bound_alpha);
            auto rep = lower_bound(bound_n, bound_s, alpha);
            nlohmann::json j;
            j["n"] = bound_n;
            j["s"] = bound_s;
            j["alpha"] = rat_str(alpha);
            j["y_min"] = rep.y_min;
            j["l_min"] = rat_str(rep.l_min);
            j["naive_load_bound"] = rat_str(naive_load_bound(bound_n, alpha, bound_s));
            if (!bound_scheme.empty()) {
                GcScheme g = scheme_from_json(slurp(bound_scheme));
                j["scheme_satisfies_bound"] = check_scheme_bound(g);
                j["scheme_load"] = rat_str(load_report(g).l);
            }
            std::cout << j.dump(2) << "\n";
        } else if (*sweep) {
            Rat alpha = parse_rational(sw_alpha);
            std::cout << "y,delta_star,k,m,l\n";
            for (int y = 1; y <= sw_ymax; ++y) {
                auto ds = delta_star(sw_n, sw_s, alpha, y);
                if (!ds) {
                    std::cout << y << ",,,,\n";
                    continue;
                }
                int t = std::gcd(*ds, y);
                BigInt k = BigInt(sw_n) * binomial(sw_n - *ds + y - 1, y - 1) / t;
                BigInt m = BigInt(*ds) * binomial(sw_n - *ds + y - 1, y - 1) / t;
                std::cout << y << ',' << *ds << ',' << k << ',' << m << ','
                          << rat_str(Rat(*ds, sw_n)) << "\n";
            }
        } else if (*delay_cmd) {
            DelayModel m;
            if (dl_family == "pareto")
                m.family = Pareto{dl_lambda, dl_rho};
            else
                m.family = ShiftedExp{dl_gamma, dl_w};
            m.scaling = dl_scaling == "data" ? Scaling::data_dependent : Scaling::server_dependent;
            m.delta = dl_delta;
            nlohmann::json j;
            j["model"] = nlohmann::json::parse(delay_model_to_json(m));
            j["n"] = dl_n;
            j["s"] = dl_s;
            j["points"] = dl_points;
            double closed = expected_iteration_delay(m, dl_n, dl_s, dl_points);
            j["closed_form"] = closed;
            if (dl_mc > 0) {
                StreamRng rng{dl_have_seed ? dl_seed : default_seed(), 17};
                std::vector<double> xs(dl_n);
                double acc = 0;
                for (long long t = 0; t < dl_mc; ++t) {
                    for (int i = 0; i < dl_n; ++i)
                        xs[i] = sample_completion(m, dl_points, rng.next_u01());
                    std::nth_element(xs.begin(), xs.begin() + (dl_n - dl_s - 1), xs.end());
                    acc += xs[dl_n - dl_s - 1];
                }
                double mc = acc / dl_mc;
                j["monte_carlo"] = mc;
                j["trials"] = dl_mc;
                j["relative_gap"] = std::abs(mc - closed) / closed;
            }
            if (dl_compare_alpha > 0) {
                double d = dl_compare_points > 0 ? dl_compare_points : static_cast<double>(dl_n);
                auto cmp = scheme1_vs_scheme2(m, dl_n, dl_compare_alpha, d);
                j["comparison"] = {{"alpha", dl_compare_alpha},
                                   {"s1", cmp.s1},
                                   {"s2", cmp.s2},
                                   {"delay_uncoded", cmp.delay1},
                                   {"delay_replicated", cmp.delay2},
                                   {"replicated_favored", cmp.scheme2_favored}};
            }
            std::cout << j.dump(2) << "\n";
        } else if (*simulate) {
            SimConfig cfg;
            cfg.scheme = scheme_from_json(slurp(sim_scheme_path));
            cfg.model = sim_model_path.empty() ? default_model()
                                               : delay_model_from_json(slurp(sim_model_path));
            cfg.data = sim_data;
            cfg.data.task = sim_task == "logistic" ? Task::logistic : Task::least_squares;
            cfg.step = sim_step;
            cfg.iterations = sim_iters;
            cfg.persistence_block = sim_block;
            cfg.seed = sim_have_seed ? sim_seed : default_seed();
            cfg.normalize_by_recovered = sim_normalize;
            cfg.delta_override = sim_delta_override;
            cfg.pattern = make_pattern(sim_pattern, sim_forced);
            spill(sim_out, trace_csv(run_sim(cfg)));
        } else if (*compare) {
            if (cp_mode == "fixed-s" && cp_s <= 0) throw ConfigError("fixed-s mode needs --s");
            if (cp_mode == "fixed-alpha" && cp_alpha.empty())
                throw ConfigError("fixed-alpha mode needs --alpha");
            CompareConfig cfg;
            cfg.model = cp_model_path.empty() ? default_model()
                                              : delay_model_from_json(slurp(cp_model_path));
            cfg.data = cp_data;
            cfg.data.task = cp_task == "logistic" ? Task::logistic : Task::least_squares;
            cfg.step = cp_step;
            cfg.iterations = cp_iters;
            cfg.persistence_block = cp_block;
            cfg.seed = cp_have_seed ? cp_seed : default_seed();
            cfg.pattern = make_pattern(cp_pattern, cp_forced);
            std::map<std::string, double> overrides;
            for (const auto& ov : cp_overrides) {
                auto eq = ov.find('=');
                if (eq == std::string::npos)
                    throw ConfigError("--delta-override wants name=value");
                overrides[ov.substr(0, eq)] = std::stod(ov.substr(eq + 1));
            }
            for (const auto& token : split(cp_schemes, ',')) {
                auto entry = build_entry(parse_token(token), cp_mode, cp_n, cp_s, cp_alpha);
                if (overrides.count(entry.name)) entry.delta_override = overrides[entry.name];
                cfg.entries.push_back(std::move(entry));
            }
            auto traces = run_comparison(cfg);
            std::filesystem::create_directories(cp_outdir);
            nlohmann::json manifest;
            manifest["mode"] = cp_mode;
            manifest["n"] = cp_n;
            if (cp_mode == "fixed-s") manifest["s"] = cp_s;
            if (!cp_alpha.empty()) manifest["alpha"] = cp_alpha;
            manifest["seed"] = cfg.seed;
            manifest["iterations"] = cfg.iterations;
            manifest["model"] = nlohmann::json::parse(delay_model_to_json(cfg.model));
            auto arr = nlohmann::json::array();
            for (size_t i = 0; i < cfg.entries.size(); ++i) {
                const auto& e = cfg.entries[i];
                std::string stem = e.name;
                for (auto& c : stem)
                    if (c == ':' || c == '/' || c == '.' || c == '=') c = '_';
                std::string fname = cp_outdir + "/trace_" + std::to_string(i) + "_" + stem + ".csv";
                std::ofstream out(fname);
                out << trace_csv(traces[i]);
                auto rep = load_report(e.scheme);
                nlohmann::json sj;
                sj["name"] = e.name;
                sj["label"] = family_name(e.scheme.family);
                sj["alpha"] = rat_str(e.scheme.params.alpha);
                sj["s"] = e.scheme.params.s;
                sj["k"] = e.scheme.params.k;
                sj["m"] = rep.m;
                sj["l"] = rat_str(rep.l);
                sj["trace"] = fname;
                if (e.delta_override >= 0) sj["delta_override"] = e.delta_override;
                auto hits = nlohmann::json::array();
                for (long long h : traces[i].partition_hits) hits.push_back(h);
                sj["partition_hits"] = std::move(hits);
                arr.push_back(std::move(sj));
            }
            manifest["schemes"] = std::move(arr);
            std::ofstream mf(cp_outdir + "/manifest.json");
            mf << manifest.dump(2) << "\n";
            std::cout << manifest.dump(2) << "\n";
        }
    } catch (const ConstructionInfeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const InfiniteMeanError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const OracleTooLarge& e) {
        std::cerr << "too large: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return 0;
}
