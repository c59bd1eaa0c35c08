#pragma once

#include <gradcode/decode.hpp>
#include <gradcode/delay.hpp>
#include <gradcode/scheme.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace gradcode {

enum class Task { least_squares, logistic };

struct DatasetSpec {
    int points = 1000;   // d; must be a multiple of every scheme's k
    int dim = 10;        // feature dimension
    double noise = 0.5;
    Task task = Task::least_squares;
    int heldout = 500;
};

struct Dataset {
    DatasetSpec spec;
    std::vector<double> x;        // points * dim, row-major
    std::vector<double> y;
    std::vector<double> x_held;   // heldout * dim
    std::vector<double> y_held;
};

Dataset make_dataset(const DatasetSpec& spec, std::uint64_t seed);

struct StragglerPattern {
    enum class Kind { slowest, consecutive, custom };
    Kind kind = Kind::slowest;
    std::vector<int> forced;  // 0-based; used by custom
};

struct SimConfig {
    GcScheme scheme;
    DelayModel model;
    DatasetSpec data;
    double step = 2e-3;
    int iterations = 100;
    int persistence_block = 300;  // iterations between delay redraws
    std::uint64_t seed = 1;
    bool normalize_by_recovered = false;
    StragglerPattern pattern;
    double delta_override = -1.0;  // per-scheme data-dependent delta; <0 = model's
};

struct IterRecord {
    int iter = 0;           // 1-based
    double wall_clock = 0;  // cumulative seconds
    int recovered = 0;
    double loss = 0;        // training objective
    double accuracy = 0;    // held-out accuracy; NaN for regression
    bool shortfall = false;
};

struct SimTrace {
    std::vector<IterRecord> records;
    std::vector<long long> partition_hits;  // recovered-set histogram over iterations
    std::vector<double> final_weights;
};

SimTrace run_sim(const SimConfig& config);

struct CompareEntry {
    std::string name;
    GcScheme scheme;
    double delta_override = -1.0;
};

struct CompareConfig {
    std::vector<CompareEntry> entries;
    DelayModel model;
    DatasetSpec data;
    double step = 2e-3;
    int iterations = 300;
    int persistence_block = 300;
    std::uint64_t seed = 1;
    StragglerPattern pattern;
};

// Runs every entry against identical per-worker delay draws (common random
// numbers) and the same dataset.
std::vector<SimTrace> run_comparison(const CompareConfig& config);

std::string trace_csv(const SimTrace& trace);

// Per-partition gradient vectors (k * dim, row-major) at the given weights.
std::vector<double> partition_gradients(const Dataset& data, int k,
                                        const std::vector<double>& weights);

// Master-side combination of worker messages according to the certificate.
std::vector<double> apply_certificate(const GcScheme& scheme, const RecoveryCertificate& cert,
                                      const std::vector<double>& grads, int dim);

// Reference: direct sum of the recovered partitions' gradients.
std::vector<double> direct_recovered_sum(const RecoveryCertificate& cert,
                                         const std::vector<double>& grads, int dim);

double training_loss(const Dataset& data, const std::vector<double>& weights);
double heldout_accuracy(const Dataset& data, const std::vector<double>& weights);

// Conservative Lipschitz bound for the least-squares training objective's
// gradient (sum form); step sizes below 1/L give monotone loss.
double lipschitz_bound(const Dataset& data);

}  // namespace gradcode
