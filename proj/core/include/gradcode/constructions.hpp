#pragma once

#include <gradcode/scheme.hpp>

#include <optional>
#include <string>
#include <vector>

namespace gradcode {

// Parameters of the interpolating family: partitions are index lists of length
// y whose cyclic gaps are at least gamma_i, with sum(gamma) = delta <= s.
struct IntermediateParams {
    int y = 1;
    int delta = 1;
    std::vector<int> gammas;  // empty = balanced split, larger entries last

    static IntermediateParams with_defaults(int y, int delta);
};

struct TDesign {
    int t = 0;
    int v = 0;
    int p = 0;
    long long lambda = 0;
    std::vector<std::vector<int>> blocks;  // 0-based point indices, sorted
};

// Throws ConstructionInfeasible naming the violating t-subset if the block
// family is not a t-design with the stated lambda.
void validate_design(const TDesign& design);

TDesign hadamard_3_8_4_1();
TDesign design_from_text(const std::string& text);  // header "t v p lambda", blocks 1-based
std::string design_to_text(const TDesign& design);

// Cyclic assignment, one sum message per worker. Requires r | beta.
GcScheme build_cyclic1(int n, const Rat& alpha, int s);

// Cyclic assignment, sum message plus prefix-sum message. Requires
// r - (beta mod r) <= n - beta; falls back to build_cyclic1 when r | beta.
GcScheme build_cyclic2(int n, const Rat& alpha, int s);

// Partitions indexed by y-subsets of workers, every gradient sent individually.
GcScheme build_combinatorial(int n, const Rat& alpha, int s, int y);

// Same assignment as build_combinatorial with gcd(n, y) = 1; one sum message
// plus individual gradients for all non-designated partitions.
GcScheme build_balanced(int n, const Rat& alpha, int s, int y);

GcScheme build_from_tdesign(const TDesign& design);

GcScheme build_intermediate(int n, const Rat& alpha, int s, const IntermediateParams& ip);

// Smallest delta in [y, s] making the intermediate family (alpha, s)-feasible.
std::optional<int> delta_star(int n, int s, const Rat& alpha, int y);

// One partition per worker; master sums whatever the fastest n-s workers send.
GcScheme build_uncoded_forget_s(int n, int s);

// Replication groups of d consecutive workers sharing d consecutive partitions.
GcScheme build_frc(int n, int s);
int frc_group_size(int n, int s);

// Full recovery (alpha = 1) with s+1 cyclically assigned partitions per worker.
GcScheme build_cgc_full(int n, int s);

}  // namespace gradcode
