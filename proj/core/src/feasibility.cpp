#include <gradcode/feasibility.hpp>

#include <gradcode/errors.hpp>
#include <gradcode/rng.hpp>

#include <algorithm>
#include <numeric>

namespace gradcode {

namespace {

// Reduced row echelon form over the rationals; returns pivot columns.
std::vector<int> rref(std::vector<std::vector<Rat>>& rows, int cols) {
    std::vector<int> pivots;
    int rank = 0;
    for (int col = 0; col < cols && rank < static_cast<int>(rows.size()); ++col) {
        int sel = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (rows[r][col] != 0) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(rows[rank], rows[sel]);
        Rat inv = rows[rank][col];
        for (auto& v : rows[rank]) v /= inv;
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            Rat f = rows[r][col];
            for (int c = col; c < cols; ++c) rows[r][c] -= f * rows[rank][c];
        }
        pivots.push_back(col);
        ++rank;
    }
    rows.resize(pivots.size());
    return pivots;
}

// Maximum weight of a 0/1 vector in the row space. A vector in the span is
// determined by its values at the pivot columns; branch over those (ones
// first) and prune with an optimistic weight bound.
struct MaxWeightSearch {
    const std::vector<std::vector<Rat>>& basis;
    const std::vector<int>& pivots;
    std::vector<int> free_cols;
    std::vector<int> last_touch;  // per free col: deepest basis row with nonzero entry
    int best = 0;

    MaxWeightSearch(const std::vector<std::vector<Rat>>& basis_rows,
                    const std::vector<int>& pivot_cols, int cols)
        : basis(basis_rows), pivots(pivot_cols) {
        std::vector<bool> is_pivot(cols, false);
        for (int p : pivots) is_pivot[p] = true;
        for (int c = 0; c < cols; ++c) {
            if (is_pivot[c]) continue;
            int last = -1;
            for (int r = 0; r < static_cast<int>(basis.size()); ++r)
                if (basis[r][c] != 0) last = r;
            if (last >= 0) {
                free_cols.push_back(c);
                last_touch.push_back(last);
            }
        }
    }

    int run() {
        std::vector<Rat> partial(free_cols.size());
        dfs(0, 0, partial);
        return best;
    }

    void dfs(size_t depth, int weight, std::vector<Rat>& partial) {
        int undecided_free = 0;
        for (size_t f = 0; f < free_cols.size(); ++f)
            if (last_touch[f] >= static_cast<int>(depth)) ++undecided_free;
        if (weight + static_cast<int>(pivots.size() - depth) + undecided_free <= best) return;
        if (depth == pivots.size()) {
            best = std::max(best, weight);
            return;
        }
        for (int take : {1, 0}) {
            std::vector<Rat> next = partial;
            if (take)
                for (size_t f = 0; f < free_cols.size(); ++f) {
                    const Rat& v = basis[depth][free_cols[f]];
                    if (v != 0) next[f] += v;
                }
            bool ok = true;
            int gained = 0;
            for (size_t f = 0; f < free_cols.size() && ok; ++f) {
                if (last_touch[f] != static_cast<int>(depth)) continue;
                if (next[f] == 1)
                    ++gained;
                else if (next[f] != 0)
                    ok = false;
            }
            if (ok) dfs(depth + 1, weight + take + gained, next);
        }
    }
};

int max_recoverable(const GcScheme& g, const std::vector<bool>& straggling) {
    std::vector<std::vector<Rat>> rows;
    for (int w = 0; w < g.params.n; ++w) {
        if (straggling[w]) continue;
        for (const Row& row : g.rows[w]) {
            std::vector<Rat> dense(g.params.k);
            for (const Term& t : row) dense[t.idx] = Rat(t.coef);
            rows.push_back(std::move(dense));
        }
    }
    if (rows.empty()) return 0;
    auto pivots = rref(rows, g.params.k);
    MaxWeightSearch search(rows, pivots, g.params.k);
    return search.run();
}

}  // namespace

FeasibilityVerdict oracle_feasible(const GcScheme& g, const Rat& alpha, int s, OracleMode mode,
                                   const OracleOptions& opts) {
    auto bad = validate(g);
    if (!bad.empty()) throw StructuralError("malformed scheme: " + bad.front());
    const int n = g.params.n, k = g.params.k;
    if (s < 0 || s >= n) throw ConfigError("oracle needs 0 <= s < n");
    FeasibilityVerdict verdict;
    verdict.alpha = alpha;
    verdict.s = s;
    verdict.sampled = mode == OracleMode::sampled;
    const int target = static_cast<int>(rat_ceil(alpha * k).convert_to<long long>());

    int best_worst = k + 1;
    auto consider = [&](const std::vector<int>& set) {
        std::vector<bool> mask(n, false);
        for (int w : set) mask[w] = true;
        int got = max_recoverable(g, mask);
        ++verdict.sets_checked;
        if (got < best_worst) {
            best_worst = got;
            verdict.worst_set = set;
        }
    };

    if (mode == OracleMode::exhaustive) {
        if (binomial(n, s) > 1'000'000)
            throw OracleTooLarge("C(n,s) exceeds 1e6; use sampled mode");
        if (k > 22) throw OracleTooLarge("exhaustive 0/1 search limited to k <= 22; use sampled mode");
        std::vector<int> set(s);
        std::iota(set.begin(), set.end(), 0);
        while (true) {
            consider(set);
            int i = s - 1;
            while (i >= 0 && set[i] == n - s + i) --i;
            if (i < 0) break;
            ++set[i];
            for (int j = i + 1; j < s; ++j) set[j] = set[j - 1] + 1;
        }
    } else {
        StreamRng rng{opts.seed, 0};
        std::vector<int> pool(n);
        for (long long trial = 0; trial < opts.samples; ++trial) {
            std::iota(pool.begin(), pool.end(), 0);
            for (int i = 0; i < s; ++i) {
                int j = i + static_cast<int>(rng.next() % (n - i));
                std::swap(pool[i], pool[j]);
            }
            std::vector<int> set(pool.begin(), pool.begin() + s);
            std::sort(set.begin(), set.end());
            consider(set);
        }
    }
    verdict.worst_recoverable = best_worst;
    verdict.worst_alpha = Rat(best_worst, k);
    verdict.feasible = best_worst >= target;
    return verdict;
}

BoundReport lower_bound(int n, int s, const Rat& alpha) {
    BoundReport rep;
    for (int y = 1; y <= n; ++y) {
        if (Rat(binomial(s, y), binomial(n, y)) <= 1 - alpha) {
            rep.y_min = y;
            rep.l_min = Rat(y, n);
            return rep;
        }
    }
    throw ConfigError("no replication level satisfies the bound");  // unreachable for s < n
}

bool check_scheme_bound(const GcScheme& g) {
    LoadReport rep = load_report(g);
    BigInt y = rat_ceil(rep.l * g.params.n);
    long long yl = y.convert_to<long long>();
    return Rat(binomial(g.params.s, yl), binomial(g.params.n, yl)) <= 1 - g.params.alpha;
}

bool replication_condition(const std::vector<int>& y_list, int n, int s, int k, const Rat& alpha) {
    if (static_cast<int>(y_list.size()) != k) throw ConfigError("y_list must have length k");
    BigInt lhs = 0;
    for (int y : y_list) lhs += binomial(n - y, n - s);
    return Rat(lhs) <= Rat(binomial(n, s)) * k * (1 - alpha);
}

bool binomial_convexity(const std::vector<int>& a_list, int r) {
    if (a_list.empty()) throw ConfigError("convexity check needs a nonempty list");
    long long t = static_cast<long long>(a_list.size());
    long long sum = 0;
    for (int a : a_list) {
        if (a < 1) throw ConfigError("convexity check needs positive integers");
        sum += a;
    }
    long long a = sum / t;
    long long t1 = (a + 1) * t - sum;
    BigInt lhs = 0;
    for (int ai : a_list) lhs += binomial(ai, r);
    BigInt rhs = BigInt(t1) * binomial(a, r) + BigInt(t - t1) * binomial(a + 1, r);
    return lhs >= rhs;
}

ImpossibilityVerdict impossibility_predicates(int n, const Rat& alpha, int s, int m,
                                              const Rat& l) {
    ImpossibilityVerdict v;
    SchemeParams p{n, n, alpha, s};
    int beta = p.beta();
    v.beta = beta;
    Rat two_over_n(2, n);
    if (s == n - beta + 1 && beta % 2 == 1 && beta <= n - 1 && m == 1 && l == two_over_n)
        v.rule_beta_odd = true;
    if (s > n - beta + 1 && beta <= n - 1 && m == 1 && l <= two_over_n)
        v.rule_deep_stragglers = true;
    int r = p.r();
    if (m == 1 && r > 0 && beta % r != 0 && l <= Rat(r, n)) v.rule_cyclic_indivisible = true;
    if (l == Rat(1, n) && s > n - beta) v.rule_min_load = true;
    v.ruled_out = v.rule_beta_odd || v.rule_deep_stragglers || v.rule_min_load;
    v.ruled_out_for_cyclic = v.ruled_out || v.rule_cyclic_indivisible;
    return v;
}

Rat naive_load_bound(int n, const Rat& alpha, int s) { return alpha * (s + 1) / n; }

}  // namespace gradcode
