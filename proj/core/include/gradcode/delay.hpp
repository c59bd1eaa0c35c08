#pragma once

#include <gradcode/rational.hpp>

#include <stdexcept>
#include <string>
#include <variant>

namespace gradcode {

// Pr(X > x) = (lambda/x)^rho for x > lambda.
struct Pareto {
    double lambda = 1e-3;
    double rho = 1.1;
};

// Pr(X > x) = exp(-(x - gamma_min)/w) for x > gamma_min.
struct ShiftedExp {
    double gamma_min = 1.0;
    double w = 1.0;
};

enum class Scaling { data_dependent, server_dependent };

struct DelayModel {
    std::variant<Pareto, ShiftedExp> family = Pareto{};
    Scaling scaling = Scaling::data_dependent;
    double delta = 0.0;  // per-gradient deterministic time (data-dependent only)
};

std::string delay_model_to_json(const DelayModel& model);
DelayModel delay_model_from_json(const std::string& text);

// Inverse-CDF draw of the raw delay X from a uniform in (0, 1].
double sample_delay(const DelayModel& model, double u);

// Completion time for `points` gradient computations given the raw delay x.
double completion_time(const DelayModel& model, double points, double x);

// One full draw: completion_time(model, points, sample_delay(model, u)).
double sample_completion(const DelayModel& model, double points, double u);

// Harmonic numbers: exact rationals up to n = 30, floating sums beyond.
Rat harmonic_exact(int n);
double harmonic_double(int n);
double harmonic(int n);
double harmonic_real(double x);  // H_x = digamma(x+1) + euler_gamma

double digamma(double x);

// Expected (n-s)-th smallest of n i.i.d. raw delays; s may be fractional in
// the analytic comparisons. Pareto requires rho > 1.
double expected_order_stat(const DelayModel& model, int n, double s);

// Closed-form expected iteration delay when the master waits for the fastest
// n-s of n workers, each computing `points` gradients.
double expected_iteration_delay(const DelayModel& model, int n, int s, double points);

struct SchemeComparison {
    double s1 = 0;  // n(1-alpha), the fastest-k benchmark
    double s2 = 0;  // positive root of s(s-1) = n(n-1)(1-alpha)
    double delay1 = 0;
    double delay2 = 0;
    // The sufficient condition under which the replicated scheme (Scheme 2)
    // beats the uncoded benchmark for this model quadrant. For the
    // server-dependent shifted-exponential quadrant the benchmark always wins
    // and this is false.
    bool scheme2_favored = false;
};

SchemeComparison scheme1_vs_scheme2(const DelayModel& model, int n, double alpha, double d_points);

struct InfiniteMeanError : std::runtime_error {
    explicit InfiniteMeanError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gradcode
