#include <gradcode/scheme.hpp>

#include <gradcode/errors.hpp>

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace gradcode {

namespace {

const std::pair<Family, const char*> kFamilyNames[] = {
    {Family::cyclic1, "cyclic1"},       {Family::cyclic2, "cyclic2"},
    {Family::combinatorial, "combinatorial"}, {Family::balanced, "balanced"},
    {Family::tdesign, "tdesign"},       {Family::intermediate, "intermediate"},
    {Family::uncoded, "uncoded"},       {Family::frc, "frc"},
    {Family::cgc, "cgc"},
};

}  // namespace

const char* family_name(Family f) {
    for (auto& [fam, name] : kFamilyNames)
        if (fam == f) return name;
    return "?";
}

Family family_from_name(const std::string& name) {
    for (auto& [fam, n] : kFamilyNames)
        if (name == n) return fam;
    throw ConfigError("unknown scheme family '" + name + "'");
}

int SchemeParams::beta() const {
    return static_cast<int>(rat_ceil(alpha * n).convert_to<long long>());
}

int SchemeParams::r() const { return s + 1 + beta() - n; }

int SchemeParams::target() const {
    return static_cast<int>(rat_ceil(alpha * k).convert_to<long long>());
}

std::vector<std::string> validate(const GcScheme& g) {
    std::vector<std::string> bad;
    auto note = [&](std::string msg) { bad.push_back(std::move(msg)); };

    const int n = g.params.n, k = g.params.k;
    if (n <= 0) note("worker count must be positive");
    if (k <= 0) note("partition count must be positive");
    if (!(g.params.alpha > 0) || g.params.alpha > 1) note("alpha must lie in (0,1]");
    if (g.params.s < 0 || g.params.s >= n) note("s must lie in [0, n)");
    if (static_cast<int>(g.assignment.size()) != n) {
        note("assignment must list exactly n workers");
        return bad;
    }
    if (static_cast<int>(g.rows.size()) != n) {
        note("rows must list exactly n workers");
        return bad;
    }

    size_t m = g.rows.empty() ? 0 : g.rows[0].size();
    for (int w = 0; w < n; ++w) {
        if (g.rows[w].size() != m)
            note("worker " + std::to_string(w + 1) + " has " + std::to_string(g.rows[w].size()) +
                 " rows, expected uniform " + std::to_string(m));
        std::set<int> assigned;
        for (size_t i = 0; i < g.assignment[w].size(); ++i) {
            int p = g.assignment[w][i];
            if (p < 0 || p >= k) {
                note("worker " + std::to_string(w + 1) + " assignment index out of range");
                continue;
            }
            if (!assigned.insert(p).second)
                note("worker " + std::to_string(w + 1) + " assignment repeats partition " +
                     std::to_string(p + 1));
        }
        std::set<int> covered;
        for (size_t j = 0; j < g.rows[w].size(); ++j) {
            int prev = -1;
            for (const Term& t : g.rows[w][j]) {
                if (t.idx < 0 || t.idx >= k) {
                    note("worker " + std::to_string(w + 1) + " row " + std::to_string(j + 1) +
                         " index out of range");
                    continue;
                }
                if (t.idx <= prev)
                    note("worker " + std::to_string(w + 1) + " row " + std::to_string(j + 1) +
                         " not sorted by partition index");
                prev = t.idx;
                if (t.coef == 0)
                    note("worker " + std::to_string(w + 1) + " row " + std::to_string(j + 1) +
                         " stores a zero coefficient");
                if (!assigned.count(t.idx))
                    note("worker " + std::to_string(w + 1) + " row " + std::to_string(j + 1) +
                         " uses partition " + std::to_string(t.idx + 1) +
                         " outside its assignment");
                covered.insert(t.idx);
            }
        }
        for (int p : assigned)
            if (!covered.count(p))
                note("worker " + std::to_string(w + 1) + " is assigned partition " +
                     std::to_string(p + 1) + " that appears in no row");
    }
    return bad;
}

LoadReport load_report(const GcScheme& g) {
    auto bad = validate(g);
    if (!bad.empty()) throw StructuralError("malformed scheme: " + bad.front());
    LoadReport rep;
    rep.m = g.rows.empty() ? 0 : static_cast<int>(g.rows[0].size());
    size_t mx = 0;
    rep.replication.assign(g.params.k, 0);
    for (const auto& a : g.assignment) {
        mx = std::max(mx, a.size());
        for (int p : a) ++rep.replication[p];
    }
    rep.l = Rat(BigInt(static_cast<long long>(mx)), BigInt(g.params.k));
    return rep;
}

std::string to_json(const GcScheme& g) {
    nlohmann::json j;
    j["label"] = family_name(g.family);
    j["n"] = g.params.n;
    j["k"] = g.params.k;
    j["alpha"] = rat_str(g.params.alpha);
    j["s"] = g.params.s;
    auto assign = nlohmann::json::array();
    for (const auto& a : g.assignment) {
        auto one = nlohmann::json::array();
        for (int p : a) one.push_back(p + 1);
        assign.push_back(std::move(one));
    }
    j["assignment"] = std::move(assign);
    auto rows = nlohmann::json::array();
    for (const auto& wr : g.rows) {
        auto worker = nlohmann::json::array();
        for (const auto& row : wr) {
            auto terms = nlohmann::json::array();
            for (const Term& t : row) {
                nlohmann::json e;
                e["idx"] = t.idx + 1;
                // Coefficients that overflow int64 (possible for the coefficient-coded
                // cgc variant at large n) are emitted as decimal strings.
                if (t.coef >= std::numeric_limits<long long>::min() &&
                    t.coef <= std::numeric_limits<long long>::max())
                    e["coef"] = t.coef.convert_to<long long>();
                else
                    e["coef"] = t.coef.str();
                terms.push_back(std::move(e));
            }
            worker.push_back(std::move(terms));
        }
        rows.push_back(std::move(worker));
    }
    j["rows"] = std::move(rows);
    return j.dump(2);
}

GcScheme scheme_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad scheme JSON: ") + e.what());
    }
    GcScheme g;
    try {
        g.family = family_from_name(j.at("label").get<std::string>());
        g.params.n = j.at("n").get<int>();
        g.params.k = j.at("k").get<int>();
        g.params.alpha = parse_rational(j.at("alpha").get<std::string>());
        g.params.s = j.at("s").get<int>();
        for (const auto& a : j.at("assignment")) {
            std::vector<int> one;
            for (const auto& p : a) one.push_back(p.get<int>() - 1);
            g.assignment.push_back(std::move(one));
        }
        for (const auto& wr : j.at("rows")) {
            std::vector<Row> worker;
            for (const auto& row : wr) {
                Row r;
                for (const auto& e : row) {
                    Term t;
                    t.idx = e.at("idx").get<int>() - 1;
                    const auto& c = e.at("coef");
                    t.coef = c.is_string() ? BigInt(c.get<std::string>())
                                           : BigInt(c.get<long long>());
                    r.push_back(std::move(t));
                }
                worker.push_back(std::move(r));
            }
            g.rows.push_back(std::move(worker));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad scheme JSON: ") + e.what());
    }
    return g;
}

std::string render(const GcScheme& g) {
    const int n = g.params.n, k = g.params.k;
    auto transmits_singleton = [&](int w, int p) {
        for (const Row& row : g.rows[w])
            if (row.size() == 1 && row[0].idx == p) return true;
        return false;
    };
    size_t head = std::string("Workers").size();
    for (int w = 0; w < n; ++w) head = std::max(head, 1 + std::to_string(w + 1).size());
    std::ostringstream out;
    auto pad = [&](const std::string& s, size_t width) {
        out << s;
        for (size_t i = s.size(); i < width; ++i) out << ' ';
    };
    pad("Workers", head);
    std::vector<size_t> width(k);
    for (int p = 0; p < k; ++p) {
        std::string label = "D" + std::to_string(p + 1);
        width[p] = label.size() + 1;
        out << ' ' << label;
    }
    out << '\n';
    for (int w = 0; w < n; ++w) {
        pad("W" + std::to_string(w + 1), head);
        for (int p = 0; p < k; ++p) {
            bool assigned = std::binary_search(g.assignment[w].begin(), g.assignment[w].end(), p);
            char c = '.';
            if (assigned)
                c = (g.family == Family::balanced && !transmits_singleton(w, p)) ? '*' : '1';
            out << std::string(width[p] - 1, ' ') << c;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace gradcode
