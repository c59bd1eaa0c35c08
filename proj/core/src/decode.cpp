#include <gradcode/decode.hpp>

#include <gradcode/errors.hpp>

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace gradcode {

namespace {

std::vector<int> checked_stragglers(const GcScheme& g, std::vector<int> stragglers) {
    std::sort(stragglers.begin(), stragglers.end());
    stragglers.erase(std::unique(stragglers.begin(), stragglers.end()), stragglers.end());
    if (static_cast<int>(stragglers.size()) > g.params.s)
        throw ConfigError("straggler set larger than the scheme's tolerance s");
    for (int w : stragglers)
        if (w < 0 || w >= g.params.n) throw ConfigError("straggler index out of range");
    return stragglers;
}

std::vector<bool> straggler_mask(int n, const std::vector<int>& stragglers) {
    std::vector<bool> mask(n, false);
    for (int w : stragglers) mask[w] = true;
    return mask;
}

void finish(const GcScheme& g, RecoveryCertificate& cert) {
    std::map<int, Rat> acc;
    for (const auto& c : cert.combo)
        for (const Term& t : g.rows[c.worker][c.row]) acc[t.idx] += c.coef * Rat(t.coef);
    cert.recovered.clear();
    for (const auto& [idx, v] : acc) {
        hard_check(v == 0 || v == 1, "decoded combination is not a 0/1 sum");
        if (v == 1) cert.recovered.push_back(idx);
    }
}

// Sum-row workers of one cyclic group plus replacements, all coefficient 1.
void push_sum_rows(RecoveryCertificate& cert, const std::vector<int>& workers, int row = 0) {
    for (int w : workers) cert.combo.push_back({w, row, Rat(1)});
}

// Greedy minimal k_1..k_m with k_1 >= lo, gaps >= r, k_m <= hi, all alive.
std::optional<std::vector<int>> try_greedy_replacements(int m, int lo, int hi, int r,
                                                        const std::vector<bool>& straggling) {
    std::vector<int> ks;
    int next = lo;
    for (int t = 0; t < m; ++t) {
        int k = next;
        while (k <= hi && straggling[k]) ++k;
        if (k > hi) return std::nullopt;
        ks.push_back(k);
        next = k + r;
    }
    return ks;
}

std::vector<int> greedy_replacements(int m, int lo, int hi, int r,
                                     const std::vector<bool>& straggling) {
    auto ks = try_greedy_replacements(m, lo, hi, r, straggling);
    hard_check(ks.has_value(), "no replacement worker satisfies the gap constraints");
    return *ks;
}

}  // namespace

bool verify_certificate(const GcScheme& g, const RecoveryCertificate& cert) {
    std::vector<bool> straggling = straggler_mask(g.params.n, cert.stragglers);
    std::map<int, Rat> acc;
    for (const auto& c : cert.combo) {
        if (c.worker < 0 || c.worker >= g.params.n || straggling[c.worker]) return false;
        if (c.row < 0 || c.row >= static_cast<int>(g.rows[c.worker].size())) return false;
        for (const Term& t : g.rows[c.worker][c.row]) acc[t.idx] += c.coef * Rat(t.coef);
    }
    std::set<int> ones;
    for (const auto& [idx, v] : acc) {
        if (v == 0) continue;
        if (v != 1) return false;
        ones.insert(idx);
    }
    return ones == std::set<int>(cert.recovered.begin(), cert.recovered.end());
}

int stopping_straggler(int limit, int r, const std::vector<int>& stragglers) {
    std::vector<bool> is_straggler(limit, false);
    for (int w : stragglers)
        if (w < limit) is_straggler[w] = true;
    int i = limit - 1;
    while (i >= 0 && !is_straggler[i]) --i;
    hard_check(i >= 0, "stopping straggler needs a straggler among the grouped workers");
    std::set<int> visited;
    while (true) {
        int group = i % r;
        bool dirty = false;
        for (int j = group; j < i; j += r)
            if (is_straggler[j]) dirty = true;
        if (!dirty) return i;
        // Step to the largest straggler below i whose group was not visited
        // yet; the current group only becomes off-limits after we leave it.
        int next = -1;
        for (int j = i - 1; j >= 0; --j)
            if (is_straggler[j] && !visited.count(j % r)) {
                next = j;
                break;
            }
        if (next < 0)
            for (int j = i - 1; j >= 0; --j)
                if (is_straggler[j]) {
                    next = j;
                    break;
                }
        hard_check(next >= 0, "descent ran out of stragglers");
        visited.insert(group);
        i = next;
    }
}

RecoveryCertificate decode_cyclic1(const GcScheme& g, const std::vector<int>& stragglers_in) {
    RecoveryCertificate cert;
    cert.stragglers = checked_stragglers(g, stragglers_in);
    auto straggling = straggler_mask(g.params.n, cert.stragglers);
    const int n = g.params.n;
    const int beta = g.params.beta();
    const int r = static_cast<int>(g.assignment[0].size());

    // A straggler-free group has beta/r disjoint sum rows covering beta
    // partitions; lowest group index wins.
    for (int grp = 0; grp < r; ++grp) {
        bool clean = true;
        for (int w = grp; w < beta; w += r) clean &= !straggling[w];
        if (!clean) continue;
        std::vector<int> pick;
        for (int w = grp; w < beta; w += r) pick.push_back(w);
        push_sum_rows(cert, pick);
        finish(g, cert);
        return cert;
    }

    const int i = stopping_straggler(beta, r, cert.stragglers);
    const int grp = i % r;
    std::vector<int> below, at_or_above;
    for (int w = grp; w < beta; w += r) (w < i ? below : at_or_above).push_back(w);
    const int m = static_cast<int>(at_or_above.size());
    auto ks = greedy_replacements(m, i, n + grp - r, r, straggling);
    push_sum_rows(cert, below);
    push_sum_rows(cert, ks);
    finish(g, cert);
    hard_check(static_cast<int>(cert.recovered.size()) == beta,
               "cyclic decode did not recover beta partitions");
    return cert;
}

namespace {

// Generic certificate of the two-message cyclic shape: one x-prefix message
// plus gamma/r disjoint full-sum blocks on the rest of the circle. Scanning
// every surviving prefix anchor and packing blocks greedily left-to-right is
// complete for this shape. Covers the straggler sets the worked case analysis
// misses (its window bounds assume straggler counts that need not hold).
bool cyclic2_anchor_scan(RecoveryCertificate& cert, int n, int r, int x, int blocks,
                         const std::vector<bool>& straggling) {
    for (int u = 0; u < n; ++u) {
        if (straggling[u]) continue;
        std::vector<int> picks;
        int pos = u + x;
        bool ok = true;
        for (int b = 0; b < blocks && ok; ++b) {
            while (pos <= u + n - r && straggling[pos % n]) ++pos;
            if (pos > u + n - r) {
                ok = false;
                break;
            }
            picks.push_back(pos % n);
            pos += r;
        }
        if (!ok) continue;
        push_sum_rows(cert, picks);
        cert.combo.push_back({u, 1, Rat(1)});
        return true;
    }
    return false;
}

}  // namespace

RecoveryCertificate decode_cyclic2(const GcScheme& g, const std::vector<int>& stragglers_in) {
    const int beta = g.params.beta();
    const int n = g.params.n;
    const int r = static_cast<int>(g.assignment[0].size());
    const int x = beta % r;
    if (x == 0) return decode_cyclic1(g, stragglers_in);
    const int gamma = beta - x;

    RecoveryCertificate cert;
    cert.stragglers = checked_stragglers(g, stragglers_in);
    auto straggling = straggler_mask(n, cert.stragglers);

    std::vector<int> clean_groups;
    for (int grp = 0; grp < r; ++grp) {
        bool clean = true;
        for (int w = grp; w < gamma; w += r) clean &= !straggling[w];
        if (clean) clean_groups.push_back(grp);
    }

    bool done = false;
    if (clean_groups.empty()) {
        // Case I: descend to a straggler whose group is clean below it, swap in
        // replacement sum rows, and add one prefix row past the first survivor.
        const int i = stopping_straggler(gamma, r, cert.stragglers);
        const int grp = i % r;
        int u = i + 1;
        while (u < n && straggling[u]) ++u;
        hard_check(u < n, "no surviving worker above the stopping straggler");
        std::vector<int> below, at_or_above;
        for (int w = grp; w < gamma; w += r) (w < i ? below : at_or_above).push_back(w);
        auto ks = try_greedy_replacements(static_cast<int>(at_or_above.size()), u + x,
                                          n + grp - r, r, straggling);
        if (ks) {
            push_sum_rows(cert, below);
            push_sum_rows(cert, *ks);
            cert.combo.push_back({u, 1, Rat(1)});  // prefix row
            done = true;
        }
    } else {
        // Case II: a clean group covers gamma consecutive partitions; extend by
        // the x-prefix of the worker just past it, or fall back to a survivor
        // further along the circle.
        int used_grp = -1, prefix_worker = -1;
        for (int grp : clean_groups) {
            if (grp < r - x - 1) continue;  // the worked argument restricts B_w to w >= r-x
            if (!straggling[grp + gamma]) {
                used_grp = grp;
                prefix_worker = grp + gamma;
                break;
            }
        }
        if (used_grp < 0) {
            int a = clean_groups.back();
            for (int z = a + gamma; z <= n + a - x; ++z) {
                int w = z % n;
                if (!straggling[w]) {
                    used_grp = a;
                    prefix_worker = w;
                    break;
                }
            }
        }
        if (used_grp >= 0) {
            std::vector<int> group;
            for (int w = used_grp; w < gamma; w += r) group.push_back(w);
            push_sum_rows(cert, group);
            cert.combo.push_back({prefix_worker, 1, Rat(1)});
            done = true;
        }
    }
    if (!done)
        hard_check(cyclic2_anchor_scan(cert, n, r, x, gamma / r, straggling),
                   "no prefix anchor admits a disjoint block packing");
    finish(g, cert);
    hard_check(static_cast<int>(cert.recovered.size()) == beta,
               "two-message cyclic decode did not recover beta partitions");
    return cert;
}

RecoveryCertificate decode_individual(const GcScheme& g, const std::vector<int>& stragglers_in) {
    RecoveryCertificate cert;
    cert.stragglers = checked_stragglers(g, stragglers_in);
    auto straggling = straggler_mask(g.params.n, cert.stragglers);
    std::map<int, std::pair<int, int>> source;  // partition -> (worker, row)
    for (int w = 0; w < g.params.n; ++w) {
        if (straggling[w]) continue;
        for (int row = 0; row < static_cast<int>(g.rows[w].size()); ++row) {
            const Row& r = g.rows[w][row];
            if (r.size() == 1 && r[0].coef == 1 && !source.count(r[0].idx))
                source[r[0].idx] = {w, row};
        }
    }
    for (const auto& [p, src] : source) cert.combo.push_back({src.first, src.second, Rat(1)});
    finish(g, cert);
    return cert;
}

RecoveryCertificate decode_balanced(const GcScheme& g, const std::vector<int>& stragglers_in) {
    RecoveryCertificate cert;
    cert.stragglers = checked_stragglers(g, stragglers_in);
    auto straggling = straggler_mask(g.params.n, cert.stragglers);
    std::map<int, int> multiplicity;
    for (int w = 0; w < g.params.n; ++w) {
        if (straggling[w]) continue;
        cert.combo.push_back({w, 0, Rat(1)});  // the sum row
        for (int p : g.assignment[w]) ++multiplicity[p];
    }
    for (const auto& [p, count] : multiplicity) {
        if (count <= 1) continue;
        // Some surviving worker sends this gradient individually: at most one
        // of its holders designates it.
        bool fixed = false;
        for (int w = 0; w < g.params.n && !fixed; ++w) {
            if (straggling[w]) continue;
            for (int row = 1; row < static_cast<int>(g.rows[w].size()); ++row)
                if (g.rows[w][row].size() == 1 && g.rows[w][row][0].idx == p) {
                    cert.combo.push_back({w, row, Rat(1 - count)});
                    fixed = true;
                    break;
                }
        }
        hard_check(fixed, "multiply-covered partition has no surviving individual copy");
    }
    finish(g, cert);
    return cert;
}

RecoveryCertificate decode_frc(const GcScheme& g, const std::vector<int>& stragglers_in) {
    RecoveryCertificate cert;
    cert.stragglers = checked_stragglers(g, stragglers_in);
    auto straggling = straggler_mask(g.params.n, cert.stragglers);
    const int n = g.params.n;
    const int d = static_cast<int>(g.assignment[0].size());
    for (int cell = 0; cell < n / d; ++cell) {
        for (int w = cell * d; w < (cell + 1) * d; ++w)
            if (!straggling[w]) {
                cert.combo.push_back({w, 0, Rat(1)});
                break;
            }
    }
    finish(g, cert);
    cert.shortfall = static_cast<int>(cert.recovered.size()) < g.params.target();
    return cert;
}

RecoveryCertificate decode_cgc(const GcScheme& g, const std::vector<int>& stragglers_in) {
    bool sum_rows = true;
    for (const Term& t : g.rows[0][0]) sum_rows &= t.coef == 1;
    if (sum_rows && g.params.n % (g.params.s + 1) == 0) return decode_cyclic1(g, stragglers_in);

    RecoveryCertificate cert;
    cert.stragglers = checked_stragglers(g, stragglers_in);
    auto straggling = straggler_mask(g.params.n, cert.stragglers);
    const int n = g.params.n;
    std::vector<int> alive;
    for (int w = 0; w < n; ++w)
        if (!straggling[w]) alive.push_back(w);

    // Solve sum_i c_i * row_i = all-ones exactly (n equations, one unknown per
    // surviving worker) by rational elimination.
    const int cols = static_cast<int>(alive.size());
    std::vector<std::vector<Rat>> aug(n, std::vector<Rat>(cols + 1));
    for (int c = 0; c < cols; ++c)
        for (const Term& t : g.rows[alive[c]][0]) aug[t.idx][c] = Rat(t.coef);
    for (int eq = 0; eq < n; ++eq) aug[eq][cols] = 1;

    int rank = 0;
    std::vector<int> pivot_col;
    for (int col = 0; col < cols && rank < n; ++col) {
        int sel = -1;
        for (int row = rank; row < n; ++row)
            if (aug[row][col] != 0) {
                sel = row;
                break;
            }
        if (sel < 0) continue;
        std::swap(aug[rank], aug[sel]);
        Rat inv = aug[rank][col];
        for (auto& v : aug[rank]) v /= inv;
        for (int row = 0; row < n; ++row) {
            if (row == rank || aug[row][col] == 0) continue;
            Rat f = aug[row][col];
            for (int c2 = col; c2 <= cols; ++c2) aug[row][c2] -= f * aug[rank][c2];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (int row = rank; row < n; ++row)
        hard_check(aug[row][cols] == 0, "full-recovery system is inconsistent");
    std::vector<Rat> coef(cols);
    for (int i = 0; i < rank; ++i) coef[pivot_col[i]] = aug[i][cols];
    for (int c = 0; c < cols; ++c)
        if (coef[c] != 0) cert.combo.push_back({alive[c], 0, coef[c]});
    finish(g, cert);
    hard_check(static_cast<int>(cert.recovered.size()) == g.params.k,
               "full-recovery decode missed a partition");
    return cert;
}

RecoveryCertificate decode(const GcScheme& g, const std::vector<int>& stragglers) {
    switch (g.family) {
        case Family::cyclic1:
            return decode_cyclic1(g, stragglers);
        case Family::cyclic2:
            return decode_cyclic2(g, stragglers);
        case Family::combinatorial:
        case Family::tdesign:
        case Family::intermediate:
        case Family::uncoded:
            return decode_individual(g, stragglers);
        case Family::balanced:
            return decode_balanced(g, stragglers);
        case Family::frc:
            return decode_frc(g, stragglers);
        case Family::cgc:
            return decode_cgc(g, stragglers);
    }
    throw ConfigError("no decoder for this scheme family");
}

std::string certificate_to_json(const RecoveryCertificate& cert) {
    nlohmann::json j;
    auto strag = nlohmann::json::array();
    for (int w : cert.stragglers) strag.push_back(w + 1);
    j["stragglers"] = std::move(strag);
    auto rec = nlohmann::json::array();
    for (int p : cert.recovered) rec.push_back(p + 1);
    j["recovered"] = std::move(rec);
    auto combo = nlohmann::json::array();
    for (const auto& c : cert.combo) {
        nlohmann::json e;
        e["worker"] = c.worker + 1;
        e["row"] = c.row + 1;
        e["coef"] = rat_str(c.coef);
        combo.push_back(std::move(e));
    }
    j["combo"] = std::move(combo);
    if (cert.shortfall) j["shortfall"] = true;
    return j.dump(2);
}

RecoveryCertificate certificate_from_json(const std::string& text) {
    RecoveryCertificate cert;
    try {
        auto j = nlohmann::json::parse(text);
        for (const auto& w : j.at("stragglers")) cert.stragglers.push_back(w.get<int>() - 1);
        for (const auto& p : j.at("recovered")) cert.recovered.push_back(p.get<int>() - 1);
        for (const auto& e : j.at("combo"))
            cert.combo.push_back({e.at("worker").get<int>() - 1, e.at("row").get<int>() - 1,
                                  parse_rational(e.at("coef").get<std::string>())});
        cert.shortfall = j.value("shortfall", false);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad certificate JSON: ") + e.what());
    }
    return cert;
}

}  // namespace gradcode
