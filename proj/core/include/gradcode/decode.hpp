#pragma once

#include <gradcode/scheme.hpp>

#include <vector>

namespace gradcode {

// Which messages the master sums, with which coefficients, and what the sum is.
struct RecoveryCertificate {
    std::vector<int> stragglers;  // 0-based, sorted
    std::vector<int> recovered;   // 0-based, sorted; the index set I
    struct Combo {
        int worker = 0;  // 0-based
        int row = 0;     // 0-based within the worker's rows
        Rat coef;
    };
    std::vector<Combo> combo;
    // FRC only: the achieved |I| fell short of ceil(alpha*k). Data, not an error.
    bool shortfall = false;
};

// Exact check that sum(coef * row) over the combo equals the 0/1 indicator of
// `recovered` and touches only non-straggler messages.
bool verify_certificate(const GcScheme& scheme, const RecoveryCertificate& cert);

// Descent over straggler indices below `limit` (worker groups are residues mod
// r). Returns a straggler whose group contains no straggler of smaller index.
// Precondition: every group has at least one straggler among workers < limit.
int stopping_straggler(int limit, int r, const std::vector<int>& stragglers);

RecoveryCertificate decode_cyclic1(const GcScheme& scheme, const std::vector<int>& stragglers);
RecoveryCertificate decode_cyclic2(const GcScheme& scheme, const std::vector<int>& stragglers);
RecoveryCertificate decode_individual(const GcScheme& scheme, const std::vector<int>& stragglers);
RecoveryCertificate decode_balanced(const GcScheme& scheme, const std::vector<int>& stragglers);
RecoveryCertificate decode_frc(const GcScheme& scheme, const std::vector<int>& stragglers);
RecoveryCertificate decode_cgc(const GcScheme& scheme, const std::vector<int>& stragglers);

// Family dispatch. Stragglers are 0-based worker indices, at most params.s.
RecoveryCertificate decode(const GcScheme& scheme, const std::vector<int>& stragglers);

std::string certificate_to_json(const RecoveryCertificate& cert);
RecoveryCertificate certificate_from_json(const std::string& text);

}  // namespace gradcode
