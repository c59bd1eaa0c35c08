#pragma once

#include <gradcode/rational.hpp>

#include <string>
#include <vector>

namespace gradcode {

enum class Family {
    cyclic1,
    cyclic2,
    combinatorial,
    balanced,
    tdesign,
    intermediate,
    uncoded,
    frc,
    cgc,
};

const char* family_name(Family f);
Family family_from_name(const std::string& name);

struct SchemeParams {
    int n = 0;  // workers
    int k = 0;  // data partitions
    Rat alpha;  // recovery fraction, exact
    int s = 0;  // straggler tolerance

    // beta = ceil(alpha * n)
    int beta() const;
    // r = s + 1 + beta - n (cyclic-family load numerator)
    int r() const;
    // ceil(alpha * k), the recovery target
    int target() const;

    bool operator==(const SchemeParams&) const = default;
};

// One (partition, integer coefficient) entry of a transmitted linear combination.
struct Term {
    int idx = 0;  // 0-based partition index
    BigInt coef;
    bool operator==(const Term&) const = default;
};

// A transmitted message: sparse coefficient vector over [k], sorted by idx.
using Row = std::vector<Term>;

struct GcScheme {
    Family family = Family::uncoded;
    SchemeParams params;
    // Per worker: sorted partition indices it computes gradients for.
    std::vector<std::vector<int>> assignment;
    // Per worker: the coefficient rows it transmits (same count for every worker).
    std::vector<std::vector<Row>> rows;

    bool operator==(const GcScheme&) const = default;
};

struct LoadReport {
    int m = 0;                     // communication load: rows per worker
    Rat l;                         // max computation load, exact
    std::vector<int> replication;  // y_j: workers holding partition j
};

// Empty iff all structural invariants hold; entries are human-readable descriptions.
std::vector<std::string> validate(const GcScheme& scheme);

// Throws StructuralError when validate() is non-empty.
LoadReport load_report(const GcScheme& scheme);

std::string to_json(const GcScheme& scheme);
GcScheme scheme_from_json(const std::string& text);

// 0/1 assignment table, workers as rows and partitions as columns. For the
// balanced family, partitions whose designated worker is the row's worker are
// marked '*' (covered only by that worker's sum message, not sent individually).
std::string render(const GcScheme& scheme);

}  // namespace gradcode
