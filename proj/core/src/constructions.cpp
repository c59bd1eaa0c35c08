#include <gradcode/constructions.hpp>

#include <gradcode/errors.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace gradcode {

namespace {

constexpr long long kMaxPartitions = 1'000'000;

Row all_ones(const std::vector<int>& support) {
    Row r;
    r.reserve(support.size());
    for (int p : support) r.push_back({p, 1});
    return r;
}

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// Lexicographic y-subsets of {0..n-1}.
std::vector<std::vector<int>> lex_subsets(int n, int y) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(y);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        out.push_back(cur);
        int i = y - 1;
        while (i >= 0 && cur[i] == n - y + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < y; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

void require_combinatorial_feasible(int n, const Rat& alpha, int s, int y) {
    if (y < 1 || y > n) throw ConstructionInfeasible("y must lie in [1, n]");
    if (Rat(binomial(s, y), binomial(n, y)) > 1 - alpha)
        throw ConstructionInfeasible(
            "C(s,y)/C(n,y) <= 1-alpha fails for n=" + std::to_string(n) + " s=" +
            std::to_string(s) + " y=" + std::to_string(y) +
            "; replication y is below the feasibility threshold");
}

int checked_beta_r(int n, const Rat& alpha, int s) {
    if (!(alpha > 0) || alpha > 1) throw ConstructionInfeasible("alpha must lie in (0,1]");
    if (s < 1 || s >= n) throw ConstructionInfeasible("s must lie in [1, n)");
    SchemeParams p{n, n, alpha, s};
    int r = p.r();
    if (r <= 0)
        throw ConstructionInfeasible("s+1+beta-n must be positive for the cyclic family (got " +
                                     std::to_string(r) + ")");
    return r;
}

}  // namespace

GcScheme build_cyclic1(int n, const Rat& alpha, int s) {
    int r = checked_beta_r(n, alpha, s);
    SchemeParams params{n, n, alpha, s};
    int beta = params.beta();
    if (beta % r != 0)
        throw ConstructionInfeasible(
            "no cyclic scheme with one message per worker reaches load r/n when r=" +
            std::to_string(r) + " does not divide beta=" + std::to_string(beta) +
            "; the two-message variant may apply");
    GcScheme g;
    g.family = Family::cyclic1;
    g.params = params;
    g.assignment.resize(n);
    g.rows.resize(n);
    for (int w = 0; w < n; ++w) {
        std::vector<int> a(r);
        for (int t = 0; t < r; ++t) a[t] = (w + t) % n;
        g.assignment[w] = sorted(a);
        g.rows[w] = {all_ones(g.assignment[w])};
    }
    return g;
}

GcScheme build_cyclic2(int n, const Rat& alpha, int s) {
    int r = checked_beta_r(n, alpha, s);
    SchemeParams params{n, n, alpha, s};
    int beta = params.beta();
    int x = beta % r;
    if (x == 0) return build_cyclic1(n, alpha, s);
    if (r - x > n - beta)
        throw ConstructionInfeasible("two-message cyclic scheme needs r-(beta mod r) <= n-beta; " +
                                     std::to_string(r - x) + " > " + std::to_string(n - beta));
    GcScheme g;
    g.family = Family::cyclic2;
    g.params = params;
    g.assignment.resize(n);
    g.rows.resize(n);
    for (int w = 0; w < n; ++w) {
        std::vector<int> a(r), prefix(x);
        for (int t = 0; t < r; ++t) a[t] = (w + t) % n;
        for (int t = 0; t < x; ++t) prefix[t] = (w + t) % n;
        g.assignment[w] = sorted(a);
        g.rows[w] = {all_ones(g.assignment[w]), all_ones(sorted(prefix))};
    }
    return g;
}

GcScheme build_combinatorial(int n, const Rat& alpha, int s, int y) {
    require_combinatorial_feasible(n, alpha, s, y);
    if (binomial(n, y) > kMaxPartitions)
        throw ConfigError("combinatorial scheme would need C(n,y) > 1e6 partitions");
    auto subsets = lex_subsets(n, y);
    GcScheme g;
    g.family = Family::combinatorial;
    g.params = {n, static_cast<int>(subsets.size()), alpha, s};
    g.assignment.resize(n);
    g.rows.resize(n);
    for (size_t j = 0; j < subsets.size(); ++j)
        for (int w : subsets[j]) g.assignment[w].push_back(static_cast<int>(j));
    for (int w = 0; w < n; ++w)
        for (int p : g.assignment[w]) g.rows[w].push_back({{p, 1}});
    return g;
}

GcScheme build_balanced(int n, const Rat& alpha, int s, int y) {
    require_combinatorial_feasible(n, alpha, s, y);
    if (std::gcd(n, y) != 1)
        throw ConstructionInfeasible("balanced designation needs gcd(n,y)=1; gcd(" +
                                     std::to_string(n) + "," + std::to_string(y) + ") != 1");
    if (binomial(n, y) > kMaxPartitions)
        throw ConfigError("balanced scheme would need C(n,y) > 1e6 partitions");
    auto subsets = lex_subsets(n, y);
    std::map<std::vector<int>, int> index_of;
    for (size_t j = 0; j < subsets.size(); ++j) index_of[subsets[j]] = static_cast<int>(j);

    auto shift = [&](const std::vector<int>& sub, int by) {
        std::vector<int> out;
        out.reserve(sub.size());
        for (int e : sub) out.push_back((e + by) % n);
        return sorted(out);
    };

    // Representatives: lexicographically-first subsets containing worker 0 with
    // no two related by a cyclic shift. With gcd(n,y)=1 every shift orbit has
    // size n and contains exactly y subsets through 0, so this keeps
    // C(n-1,y-1)/y of them.
    long long want = binomial_ll(n - 1, y - 1) / y;
    std::vector<std::vector<int>> reps;
    std::set<std::vector<int>> seen_orbit_key;
    for (const auto& sub : subsets) {
        if (static_cast<long long>(reps.size()) == want) break;
        if (sub[0] != 0) continue;
        std::vector<int> key = sub;
        for (int by = 1; by < n; ++by) key = std::min(key, shift(sub, by));
        if (seen_orbit_key.insert(key).second) reps.push_back(sub);
    }
    hard_check(static_cast<long long>(reps.size()) == want,
               "shift-orbit representative count is off");

    // designated[j] = the one worker whose sum message alone covers partition j.
    std::vector<int> designated(subsets.size(), -1);
    for (const auto& rep : reps)
        for (int by = 0; by < n; ++by) {
            int j = index_of.at(shift(rep, by));
            hard_check(designated[j] == -1, "partition designated twice");
            designated[j] = by;  // rep contains 0, so the shifted set contains worker `by`
        }

    GcScheme g;
    g.family = Family::balanced;
    g.params = {n, static_cast<int>(subsets.size()), alpha, s};
    g.assignment.resize(n);
    g.rows.resize(n);
    for (size_t j = 0; j < subsets.size(); ++j)
        for (int w : subsets[j]) g.assignment[w].push_back(static_cast<int>(j));
    for (int w = 0; w < n; ++w) {
        g.rows[w].push_back(all_ones(g.assignment[w]));
        for (int p : g.assignment[w])
            if (designated[p] != w) g.rows[w].push_back({{p, 1}});
    }
    return g;
}

void validate_design(const TDesign& d) {
    if (d.t < 1 || d.p < d.t || d.v < d.p) throw ConstructionInfeasible("design needs t <= p <= v");
    BigInt expect_lambda =
        BigInt(static_cast<long long>(d.blocks.size())) * binomial(d.p, d.t);
    if (expect_lambda % binomial(d.v, d.t) != 0 ||
        expect_lambda / binomial(d.v, d.t) != d.lambda)
        throw ConstructionInfeasible("lambda does not equal |B|*C(p,t)/C(v,t)");
    for (const auto& b : d.blocks) {
        if (static_cast<int>(b.size()) != d.p || !std::is_sorted(b.begin(), b.end()) ||
            b.front() < 0 || b.back() >= d.v)
            throw ConstructionInfeasible("design block is not a sorted p-subset of the point set");
    }
    if (binomial(d.v, d.t) > kMaxPartitions)
        throw ConstructionInfeasible("design too large to check exhaustively");
    for (const auto& tsub : lex_subsets(d.v, d.t)) {
        long long cover = 0;
        for (const auto& b : d.blocks)
            if (std::includes(b.begin(), b.end(), tsub.begin(), tsub.end())) ++cover;
        if (cover != d.lambda) {
            std::ostringstream what;
            what << "t-subset {";
            for (size_t i = 0; i < tsub.size(); ++i) what << (i ? "," : "") << tsub[i] + 1;
            what << "} lies in " << cover << " blocks, expected " << d.lambda;
            throw ConstructionInfeasible(what.str());
        }
    }
}

TDesign hadamard_3_8_4_1() {
    TDesign d;
    d.t = 3;
    d.v = 8;
    d.p = 4;
    d.lambda = 1;
    const int raw[14][4] = {{1, 2, 5, 6}, {3, 4, 7, 8}, {1, 3, 5, 7}, {2, 4, 6, 8}, {1, 4, 5, 8},
                            {2, 3, 6, 7}, {1, 2, 3, 4}, {5, 6, 7, 8}, {1, 2, 7, 8}, {3, 4, 5, 6},
                            {1, 3, 6, 8}, {2, 4, 5, 7}, {1, 4, 6, 7}, {2, 3, 5, 8}};
    for (const auto& b : raw) d.blocks.push_back({b[0] - 1, b[1] - 1, b[2] - 1, b[3] - 1});
    return d;
}

TDesign design_from_text(const std::string& text) {
    std::istringstream in(text);
    TDesign d;
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("empty design file");
    std::istringstream h(header);
    if (!(h >> d.t >> d.v >> d.p >> d.lambda))
        throw ConfigError("design header must be 't v p lambda'");
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<int> block;
        int pt;
        while (ls >> pt) block.push_back(pt - 1);
        if (block.empty()) continue;
        d.blocks.push_back(sorted(block));
    }
    return d;
}

std::string design_to_text(const TDesign& d) {
    std::ostringstream out;
    out << d.t << ' ' << d.v << ' ' << d.p << ' ' << d.lambda << '\n';
    for (const auto& b : d.blocks) {
        for (size_t i = 0; i < b.size(); ++i) out << (i ? " " : "") << b[i] + 1;
        out << '\n';
    }
    return out.str();
}

GcScheme build_from_tdesign(const TDesign& d) {
    validate_design(d);
    GcScheme g;
    g.family = Family::tdesign;
    Rat alpha = 1 - Rat(binomial(d.v - d.t, d.p), binomial(d.v, d.p));
    g.params = {d.v, static_cast<int>(d.blocks.size()), alpha, d.v - d.t};
    g.assignment.resize(d.v);
    g.rows.resize(d.v);
    for (size_t j = 0; j < d.blocks.size(); ++j)
        for (int w : d.blocks[j]) g.assignment[w].push_back(static_cast<int>(j));
    for (int w = 0; w < d.v; ++w)
        for (int p : g.assignment[w]) g.rows[w].push_back({{p, 1}});
    return g;
}

IntermediateParams IntermediateParams::with_defaults(int y, int delta) {
    IntermediateParams ip;
    ip.y = y;
    ip.delta = delta;
    if (y <= 0 || delta < y) return ip;  // caught by build_intermediate
    int t = std::gcd(delta, y);
    int ty = y / t, td = delta / t;
    // Balanced split of delta/t over y/t positions, larger values last, tiled
    // t times so the list is periodic with period y/t.
    std::vector<int> base(ty, td / ty);
    for (int i = 0; i < td % ty; ++i) ++base[ty - 1 - i];
    ip.gammas.reserve(y);
    for (int i = 0; i < y; ++i) ip.gammas.push_back(base[i % ty]);
    return ip;
}

GcScheme build_intermediate(int n, const Rat& alpha, int s, const IntermediateParams& in_params) {
    if (in_params.y < 1) throw ConfigError("intermediate scheme needs y >= 1");
    const int y = in_params.y, delta = in_params.delta;
    if (delta < y || delta > s)
        throw ConfigError("intermediate scheme needs y <= delta <= s");
    IntermediateParams ip = in_params;
    if (ip.gammas.empty()) ip = IntermediateParams::with_defaults(y, delta);
    if (static_cast<int>(ip.gammas.size()) != y)
        throw ConfigError("gamma list must have length y");
    int sum = 0;
    for (int gmm : ip.gammas) {
        if (gmm < 1) throw ConfigError("gamma entries must be positive");
        sum += gmm;
    }
    if (sum != delta) throw ConfigError("gamma entries must sum to delta");
    const int t = std::gcd(delta, y);
    const int ty = y / t;
    for (int i = 0; i < y; ++i)
        if (ip.gammas[i] != ip.gammas[i % ty])
            throw ConfigError("for gcd(delta,y)=" + std::to_string(t) +
                              " the gamma list must be periodic with period y/t");

    // Feasibility: y*C(s-delta+y, y) <= (1-alpha)*n*C(n-delta+y-1, y-1).
    BigInt lhs = BigInt(y) * binomial(s - delta + y, y);
    BigInt denom = BigInt(n) * binomial(n - delta + y - 1, y - 1);
    if (Rat(lhs, denom) > 1 - alpha)
        throw ConstructionInfeasible(
            "gap-constrained family infeasible: y*C(s-delta+y,y)/(n*C(n-delta+y-1,y-1)) "
            "exceeds 1-alpha for delta=" + std::to_string(delta) + ", y=" + std::to_string(y));

    // Enumerate lists [c_1..c_y] as (start, gap vector): gaps g_i >= gamma_i for
    // i < y and the wrap-around gap n - sum(g) >= gamma_y. Enumeration order is
    // start ascending, then gaps lexicographic; that is the serialized order.
    std::vector<std::vector<int>> lists;
    std::vector<int> gaps(std::max(0, y - 1));
    auto emit = [&](int start) {
        std::vector<int> list(y);
        list[0] = start;
        for (int i = 1; i < y; ++i) list[i] = (list[i - 1] + gaps[i - 1]) % n;
        lists.push_back(std::move(list));
    };
    std::function<void(int, int, int)> rec = [&](int start, int pos, int used) {
        if (pos == y - 1) {
            if (n - used >= ip.gammas[y - 1]) emit(start);
            return;
        }
        for (int gp = ip.gammas[pos]; used + gp + (y - 2 - pos) <= n - ip.gammas[y - 1]; ++gp) {
            gaps[pos] = gp;
            rec(start, pos + 1, used + gp);
        }
    };
    for (int start = 0; start < n; ++start) rec(start, 0, 0);

    // Lists related by rotating y/t positions share a worker set; keep the
    // lexicographically smallest rotation as the partition name.
    auto canonical = [&](const std::vector<int>& list) {
        std::vector<int> best = list, rot = list;
        for (int step = 1; step < t; ++step) {
            std::rotate(rot.begin(), rot.begin() + ty, rot.end());
            best = std::min(best, rot);
        }
        return best;
    };
    std::vector<std::vector<int>> parts;
    for (const auto& list : lists)
        if (t == 1 || list == canonical(list)) parts.push_back(list);

    BigInt expect_k = BigInt(n) * binomial(n - delta + y - 1, y - 1) / t;
    if (expect_k > kMaxPartitions) throw ConfigError("intermediate scheme needs > 1e6 partitions");
    hard_check(BigInt(static_cast<long long>(parts.size())) == expect_k,
               "merged partition count is off");

    GcScheme g;
    g.family = Family::intermediate;
    g.params = {n, static_cast<int>(parts.size()), alpha, s};
    g.assignment.resize(n);
    g.rows.resize(n);
    for (size_t j = 0; j < parts.size(); ++j) {
        std::set<int> workers;
        for (int i = 0; i < y; ++i)
            for (int off = 0; off < ip.gammas[i]; ++off)
                workers.insert((parts[j][i] + off) % n);
        hard_check(static_cast<int>(workers.size()) == delta,
                   "partition not replicated exactly delta times");
        for (int w : workers) g.assignment[w].push_back(static_cast<int>(j));
    }
    for (int w = 0; w < n; ++w)
        for (int p : g.assignment[w]) g.rows[w].push_back({{p, 1}});
    return g;
}

std::optional<int> delta_star(int n, int s, const Rat& alpha, int y) {
    if (y < 1) throw ConfigError("delta_star needs y >= 1");
    for (int delta = y; delta <= s; ++delta) {
        BigInt lhs = BigInt(y) * binomial(s - delta + y, y);
        BigInt denom = BigInt(n) * binomial(n - delta + y - 1, y - 1);
        if (Rat(lhs, denom) <= 1 - alpha) return delta;
    }
    return std::nullopt;
}

GcScheme build_uncoded_forget_s(int n, int s) {
    if (s < 1 || s >= n) throw ConstructionInfeasible("forget-s needs 1 <= s < n");
    GcScheme g;
    g.family = Family::uncoded;
    g.params = {n, n, Rat(n - s, n), s};
    g.assignment.resize(n);
    g.rows.resize(n);
    for (int w = 0; w < n; ++w) {
        g.assignment[w] = {w};
        g.rows[w] = {{{w, 1}}};
    }
    return g;
}

int frc_group_size(int n, int s) {
    if (s < 1 || s >= n) throw ConstructionInfeasible("frc needs 1 <= s < n");
    double ratio = std::log(static_cast<double>(n) / s);
    double raw = std::max(1.0, std::log(n * ratio) / ratio);
    for (int d = 1; d <= n; ++d)
        if (n % d == 0 && d + 1e-9 >= raw) return d;
    throw ConstructionInfeasible("no divisor of n reaches the replication degree " +
                                 std::to_string(raw));
}

GcScheme build_frc(int n, int s) {
    int d = frc_group_size(n, s);
    GcScheme g;
    g.family = Family::frc;
    g.params = {n, n, Rat(1), s};
    g.assignment.resize(n);
    g.rows.resize(n);
    // Workers j*d..j*d+d-1 are replicas, all holding partitions j*d..j*d+d-1
    // and transmitting their sum. Column-wise this is d groups of n/d workers,
    // each group covering all n partitions.
    for (int w = 0; w < n; ++w) {
        int cell = w / d;
        std::vector<int> a(d);
        for (int i = 0; i < d; ++i) a[i] = cell * d + i;
        g.assignment[w] = a;
        g.rows[w] = {all_ones(a)};
    }
    return g;
}

GcScheme build_cgc_full(int n, int s) {
    if (s < 0 || s >= n) throw ConstructionInfeasible("cgc needs 0 <= s < n");
    GcScheme g;
    g.family = Family::cgc;
    g.params = {n, n, Rat(1), s};
    g.assignment.resize(n);
    g.rows.resize(n);
    const int span = s + 1;
    for (int w = 0; w < n; ++w) {
        std::vector<int> a(span);
        for (int i = 0; i < span; ++i) a[i] = (w + i) % n;
        g.assignment[w] = sorted(a);
    }
    if (n % span == 0) {
        // The cyclic one-message construction covers alpha = 1 exactly when
        // s+1 divides n; plain sum rows then decode with 0/1 coefficients.
        for (int w = 0; w < n; ++w) g.rows[w] = {all_ones(g.assignment[w])};
        return g;
    }
    // General parameters: worker w's row evaluates the polynomial with roots at
    // the points it does not hold, f_w(X) = prod_{j not in S_w} (X - j). Any
    // n-s such rows are independent degree-(n-s-1) polynomials, so the constant
    // polynomial 1 (the all-ones vector) lies in their span.
    for (int w = 0; w < n; ++w) {
        std::vector<bool> held(n, false);
        for (int p : g.assignment[w]) held[p] = true;
        Row row;
        for (int p : g.assignment[w]) {
            BigInt val = 1;
            for (int j = 0; j < n; ++j)
                if (!held[j]) val *= p - j;
            row.push_back({p, val});
        }
        g.rows[w] = {row};
    }
    return g;
}

}  // namespace gradcode
