#pragma once

#include <gradcode/scheme.hpp>

#include <cstdint>
#include <vector>

namespace gradcode {

struct FeasibilityVerdict {
    bool feasible = false;
    Rat alpha;  // the recovery fraction that was checked
    int s = 0;
    bool sampled = false;
    long long sets_checked = 0;
    std::vector<int> worst_set;     // 0-based straggler set minimizing max |I|
    int worst_recoverable = 0;      // max recoverable |I| under worst_set
    Rat worst_alpha;                // worst_recoverable / k
};

enum class OracleMode { exhaustive, sampled };

struct OracleOptions {
    long long samples = 10'000;
    std::uint64_t seed = 1;
};

// Exact ground truth: for each straggler set, the row space of the surviving
// messages is computed by rational elimination and searched for the
// maximum-weight 0/1 vector. Exhaustive mode requires C(n,s) <= 1e6 and k <= 22.
FeasibilityVerdict oracle_feasible(const GcScheme& scheme, const Rat& alpha, int s,
                                   OracleMode mode, const OracleOptions& opts = {});

struct BoundReport {
    int y_min = 0;  // smallest replication satisfying C(s,y)/C(n,y) <= 1-alpha
    Rat l_min;      // y_min / n
};

BoundReport lower_bound(int n, int s, const Rat& alpha);

// C(s, ceil(n*l)) / C(n, ceil(n*l)) <= 1 - alpha for the scheme's actual load.
bool check_scheme_bound(const GcScheme& scheme);

// Replication counts y_j admissible for (alpha, s): sum_j C(n - y_j, n - s)
// <= C(n, s) * k * (1 - alpha), exactly.
bool replication_condition(const std::vector<int>& y_list, int n, int s, int k, const Rat& alpha);

// sum C(a_i, r) >= t1*C(a, r) + (t - t1)*C(a+1, r) with a = floor(mean),
// t1 = (a+1)*t - sum.
bool binomial_convexity(const std::vector<int>& a_list, int r);

// Impossibility rules for the k = n regime.
struct ImpossibilityVerdict {
    int beta = 0;
    // s = n-beta+1, beta odd and <= n-1, m = 1, l = 2/n: no scheme exists.
    bool rule_beta_odd = false;
    // s > n-beta+1, beta <= n-1, m = 1, l <= 2/n: no scheme exists.
    bool rule_deep_stragglers = false;
    // cyclic assignment, m = 1, r does not divide beta, l <= r/n: no scheme.
    bool rule_cyclic_indivisible = false;
    // l = 1/n requires s <= n - beta.
    bool rule_min_load = false;
    bool ruled_out = false;            // any scheme-agnostic rule fired
    bool ruled_out_for_cyclic = false; // including the cyclic-only rule
};

ImpossibilityVerdict impossibility_predicates(int n, const Rat& alpha, int s, int m, const Rat& l);

// alpha*(s+1)/n: the load bound for coding over a fixed alpha-fraction only.
Rat naive_load_bound(int n, const Rat& alpha, int s);

}  // namespace gradcode
