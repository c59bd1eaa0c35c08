#include <gradcode/sim.hpp>

#include <gradcode/errors.hpp>
#include <gradcode/rng.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace gradcode {

namespace {

constexpr std::uint64_t kDelayStream = 0x64656c6179ULL;    // worker delay draws
constexpr std::uint64_t kFeatureStream = 0x66656174ULL;
constexpr std::uint64_t kLabelStream = 0x6c61626cULL;
constexpr std::uint64_t kWeightStream = 0x77737461ULL;

double normal(StreamRng& rng) {
    constexpr double two_pi = 6.283185307179586476925287;
    double u1 = rng.next_u01(), u2 = rng.next_u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void fill_points(std::vector<double>& x, std::vector<double>& y, int count, const DatasetSpec& s,
                 const std::vector<double>& w_star, StreamRng& feat, StreamRng& lab) {
    const int p = s.dim;
    x.resize(static_cast<size_t>(count) * p);
    y.resize(count);
    for (int i = 0; i < count; ++i) {
        if (s.task == Task::least_squares) {
            double dot = 0;
            for (int j = 0; j < p; ++j) {
                double v = normal(feat);
                x[static_cast<size_t>(i) * p + j] = v;
                dot += v * w_star[j];
            }
            y[i] = dot + s.noise * normal(lab);
        } else {
            int label = i % 2;
            double mu = (label ? 1.0 : -1.0) / std::sqrt(static_cast<double>(p));
            for (int j = 0; j < p; ++j)
                x[static_cast<size_t>(i) * p + j] = mu + s.noise * normal(feat);
            y[i] = label;
        }
    }
}

}  // namespace

Dataset make_dataset(const DatasetSpec& spec, std::uint64_t seed) {
    if (spec.points <= 0 || spec.dim <= 0) throw ConfigError("dataset needs points > 0, dim > 0");
    Dataset d;
    d.spec = spec;
    StreamRng weights{seed, kWeightStream};
    std::vector<double> w_star(spec.dim);
    for (auto& w : w_star) w = normal(weights);
    StreamRng feat{seed, kFeatureStream}, lab{seed, kLabelStream};
    fill_points(d.x, d.y, spec.points, spec, w_star, feat, lab);
    StreamRng feat_h{seed, kFeatureStream + 1}, lab_h{seed, kLabelStream + 1};
    fill_points(d.x_held, d.y_held, spec.heldout, spec, w_star, feat_h, lab_h);
    return d;
}

std::vector<double> partition_gradients(const Dataset& data, int k,
                                        const std::vector<double>& beta) {
    const int d = data.spec.points, p = data.spec.dim;
    if (d % k != 0) throw ConfigError("dataset points must be a multiple of k");
    const int per = d / k;
    std::vector<double> grads(static_cast<size_t>(k) * p, 0.0);
    for (int i = 0; i < d; ++i) {
        const double* xi = &data.x[static_cast<size_t>(i) * p];
        double dot = 0;
        for (int j = 0; j < p; ++j) dot += xi[j] * beta[j];
        double resid = data.spec.task == Task::least_squares ? dot - data.y[i]
                                                             : sigmoid(dot) - data.y[i];
        double* g = &grads[static_cast<size_t>(i / per) * p];
        for (int j = 0; j < p; ++j) g[j] += resid * xi[j];
    }
    return grads;
}

std::vector<double> apply_certificate(const GcScheme& g, const RecoveryCertificate& cert,
                                      const std::vector<double>& grads, int dim) {
    std::vector<double> out(dim, 0.0);
    for (const auto& c : cert.combo) {
        // The worker's message is the row applied to its partition gradients.
        std::vector<double> msg(dim, 0.0);
        for (const Term& t : g.rows[c.worker][c.row]) {
            double coef = t.coef.convert_to<double>();
            const double* src = &grads[static_cast<size_t>(t.idx) * dim];
            for (int j = 0; j < dim; ++j) msg[j] += coef * src[j];
        }
        double coef = rat_double(c.coef);
        for (int j = 0; j < dim; ++j) out[j] += coef * msg[j];
    }
    return out;
}

std::vector<double> direct_recovered_sum(const RecoveryCertificate& cert,
                                         const std::vector<double>& grads, int dim) {
    std::vector<double> out(dim, 0.0);
    for (int idx : cert.recovered) {
        const double* src = &grads[static_cast<size_t>(idx) * dim];
        for (int j = 0; j < dim; ++j) out[j] += src[j];
    }
    return out;
}

double training_loss(const Dataset& data, const std::vector<double>& beta) {
    const int d = data.spec.points, p = data.spec.dim;
    double loss = 0;
    for (int i = 0; i < d; ++i) {
        const double* xi = &data.x[static_cast<size_t>(i) * p];
        double dot = 0;
        for (int j = 0; j < p; ++j) dot += xi[j] * beta[j];
        if (data.spec.task == Task::least_squares) {
            double r = dot - data.y[i];
            loss += 0.5 * r * r;
        } else {
            double z = data.y[i] > 0.5 ? dot : -dot;
            loss += z > -30 ? std::log1p(std::exp(-z)) : -z;
        }
    }
    return loss / d;
}

double heldout_accuracy(const Dataset& data, const std::vector<double>& beta) {
    if (data.spec.task != Task::logistic) return std::numeric_limits<double>::quiet_NaN();
    const int h = data.spec.heldout, p = data.spec.dim;
    int hit = 0;
    for (int i = 0; i < h; ++i) {
        const double* xi = &data.x_held[static_cast<size_t>(i) * p];
        double dot = 0;
        for (int j = 0; j < p; ++j) dot += xi[j] * beta[j];
        hit += (dot > 0) == (data.y_held[i] > 0.5);
    }
    return static_cast<double>(hit) / h;
}

double lipschitz_bound(const Dataset& data) {
    double trace = 0;
    for (double v : data.x) trace += v * v;
    return trace;  // >= lambda_max(X^T X)
}

namespace {

struct Engine {
    const GcScheme& scheme;
    DelayModel model;
    const Dataset& data;
    const SimConfig& cfg;
    std::vector<double> points_per_worker;
    std::map<std::vector<int>, RecoveryCertificate> memo;

    Engine(const GcScheme& s, const Dataset& d, const SimConfig& c, double delta_override)
        : scheme(s), model(c.model), data(d), cfg(c) {
        if (delta_override >= 0) model.delta = delta_override;
        const int per = data.spec.points / scheme.params.k;
        for (const auto& a : scheme.assignment)
            points_per_worker.push_back(static_cast<double>(a.size()) * per);
    }

    std::vector<int> stragglers_for(const std::vector<double>& completion) {
        const int n = scheme.params.n, s = scheme.params.s;
        std::vector<int> forced;
        if (cfg.pattern.kind == StragglerPattern::Kind::consecutive) {
            forced.resize(s);
            std::iota(forced.begin(), forced.end(), 0);
        } else if (cfg.pattern.kind == StragglerPattern::Kind::custom) {
            forced = cfg.pattern.forced;
            if (static_cast<int>(forced.size()) > s)
                throw ConfigError("forced straggler pattern larger than s");
        }
        std::vector<bool> taken(n, false);
        for (int w : forced) {
            if (w < 0 || w >= n) throw ConfigError("forced straggler index out of range");
            taken[w] = true;
        }
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return completion[a] != completion[b] ? completion[a] > completion[b] : a < b;
        });
        std::vector<int> set = forced;
        for (int w : order) {
            if (static_cast<int>(set.size()) >= s) break;
            if (!taken[w]) {
                set.push_back(w);
                taken[w] = true;
            }
        }
        std::sort(set.begin(), set.end());
        return set;
    }

    SimTrace run() {
        const int n = scheme.params.n, s = scheme.params.s, k = scheme.params.k;
        const int p = data.spec.dim;
        SimTrace trace;
        trace.partition_hits.assign(k, 0);
        std::vector<double> beta(p, 0.0);
        double wall = 0;
        std::vector<double> completion(n);
        for (int iter = 0; iter < cfg.iterations; ++iter) {
            std::uint64_t block = static_cast<std::uint64_t>(iter / cfg.persistence_block);
            for (int w = 0; w < n; ++w) {
                double u = u01(hash3(cfg.seed, kDelayStream + w, block));
                completion[w] = sample_completion(model, points_per_worker[w], u);
            }
            auto stragglers = stragglers_for(completion);
            std::vector<double> sorted_times = completion;
            std::nth_element(sorted_times.begin(), sorted_times.begin() + (n - s - 1),
                             sorted_times.end());
            wall += sorted_times[n - s - 1];

            auto it = memo.find(stragglers);
            if (it == memo.end()) it = memo.emplace(stragglers, decode(scheme, stragglers)).first;
            const RecoveryCertificate& cert = it->second;
            for (int idx : cert.recovered) ++trace.partition_hits[idx];

            auto grads = partition_gradients(data, k, beta);
            auto update = apply_certificate(scheme, cert, grads, p);
            double scale = cfg.step;
            if (cfg.normalize_by_recovered && !cert.recovered.empty())
                scale /= static_cast<double>(cert.recovered.size());
            for (int j = 0; j < p; ++j) beta[j] -= scale * update[j];

            IterRecord rec;
            rec.iter = iter + 1;
            rec.wall_clock = wall;
            rec.recovered = static_cast<int>(cert.recovered.size());
            rec.loss = training_loss(data, beta);
            rec.accuracy = heldout_accuracy(data, beta);
            rec.shortfall = cert.shortfall;
            trace.records.push_back(rec);
        }
        trace.final_weights = beta;
        return trace;
    }
};

}  // namespace

SimTrace run_sim(const SimConfig& cfg) {
    auto bad = validate(cfg.scheme);
    if (!bad.empty()) throw ConfigError("scheme invalid: " + bad.front());
    if (cfg.persistence_block < 1) throw ConfigError("persistence_block must be >= 1");
    if (cfg.data.points % cfg.scheme.params.k != 0)
        throw ConfigError("dataset points must be a multiple of k");
    Dataset data = make_dataset(cfg.data, cfg.seed);
    Engine eng(cfg.scheme, data, cfg, cfg.delta_override);
    return eng.run();
}

std::vector<SimTrace> run_comparison(const CompareConfig& cfg) {
    if (cfg.entries.empty()) throw ConfigError("comparison needs at least one scheme");
    const int n = cfg.entries.front().scheme.params.n;
    for (const auto& e : cfg.entries) {
        if (e.scheme.params.n != n) throw ConfigError("all schemes must share the worker count n");
        if (cfg.data.points % e.scheme.params.k != 0)
            throw ConfigError("dataset points must be a multiple of every scheme's k (" +
                              e.name + " has k=" + std::to_string(e.scheme.params.k) + ")");
    }
    Dataset data = make_dataset(cfg.data, cfg.seed);
    std::vector<SimTrace> traces;
    for (const auto& e : cfg.entries) {
        SimConfig sc;
        sc.scheme = e.scheme;
        sc.model = cfg.model;
        sc.data = cfg.data;
        sc.step = cfg.step;
        sc.iterations = cfg.iterations;
        sc.persistence_block = cfg.persistence_block;
        sc.seed = cfg.seed;
        sc.pattern = cfg.pattern;
        sc.delta_override = e.delta_override;
        Engine eng(e.scheme, data, sc, e.delta_override);
        traces.push_back(eng.run());
    }
    return traces;
}

std::string trace_csv(const SimTrace& trace) {
    std::ostringstream out;
    out << "iter,wall_clock,recovered,loss,accuracy\n";
    char buf[64];
    for (const auto& r : trace.records) {
        out << r.iter << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.wall_clock);
        out << buf << ',' << r.recovered << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.loss);
        out << buf << ',';
        if (std::isnan(r.accuracy)) {
            out << '\n';
        } else {
            std::snprintf(buf, sizeof buf, "%.17g", r.accuracy);
            out << buf << '\n';
        }
    }
    return out.str();
}

}  // namespace gradcode
