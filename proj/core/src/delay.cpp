#include <gradcode/delay.hpp>

#include <gradcode/errors.hpp>

#include <json.hpp>

#include <cmath>

namespace gradcode {

std::string delay_model_to_json(const DelayModel& model) {
    nlohmann::json j;
    if (const auto* p = std::get_if<Pareto>(&model.family)) {
        j["family"] = "pareto";
        j["lambda"] = p->lambda;
        j["rho"] = p->rho;
    } else {
        const auto& e = std::get<ShiftedExp>(model.family);
        j["family"] = "sexp";
        j["gamma"] = e.gamma_min;
        j["w"] = e.w;
    }
    nlohmann::json sc;
    sc["type"] = model.scaling == Scaling::data_dependent ? "data" : "server";
    if (model.scaling == Scaling::data_dependent) sc["delta"] = model.delta;
    j["scaling"] = std::move(sc);
    return j.dump();
}

DelayModel delay_model_from_json(const std::string& text) {
    DelayModel m;
    try {
        auto j = nlohmann::json::parse(text);
        std::string fam = j.at("family").get<std::string>();
        if (fam == "pareto")
            m.family = Pareto{j.at("lambda").get<double>(), j.at("rho").get<double>()};
        else if (fam == "sexp" || fam == "shifted-exp")
            m.family = ShiftedExp{j.at("gamma").get<double>(), j.at("w").get<double>()};
        else
            throw ConfigError("unknown delay family '" + fam + "'");
        auto sc = j.at("scaling");
        std::string type = sc.at("type").get<std::string>();
        if (type == "data") {
            m.scaling = Scaling::data_dependent;
            m.delta = sc.value("delta", 0.0);
        } else if (type == "server") {
            m.scaling = Scaling::server_dependent;
        } else {
            throw ConfigError("unknown scaling type '" + type + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad delay model JSON: ") + e.what());
    }
    return m;
}

double sample_delay(const DelayModel& model, double u) {
    if (const auto* p = std::get_if<Pareto>(&model.family))
        return p->lambda * std::pow(u, -1.0 / p->rho);
    const auto& e = std::get<ShiftedExp>(model.family);
    return e.gamma_min - e.w * std::log(u);
}

double completion_time(const DelayModel& model, double points, double x) {
    return model.scaling == Scaling::data_dependent ? points * model.delta + x : points * x;
}

double sample_completion(const DelayModel& model, double points, double u) {
    return completion_time(model, points, sample_delay(model, u));
}

Rat harmonic_exact(int n) {
    Rat h = 0;
    for (int i = 1; i <= n; ++i) h += Rat(1, i);
    return h;
}

double harmonic_double(int n) {
    double h = 0;
    for (int i = 1; i <= n; ++i) h += 1.0 / i;
    return h;
}

double harmonic(int n) { return n <= 30 ? rat_double(harmonic_exact(n)) : harmonic_double(n); }

double digamma(double x) {
    double acc = 0;
    while (x < 16.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    double inv = 1.0 / x, inv2 = inv * inv;
    double series =
        std::log(x) - 0.5 * inv -
        inv2 * (1.0 / 12 -
                inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 / 132))));
    return acc + series;
}

double harmonic_real(double x) {
    constexpr double euler_gamma = 0.57721566490153286060651209;
    return digamma(x + 1.0) + euler_gamma;
}

namespace {

double harmonic_maybe_exact(double s) {
    double rounded = std::round(s);
    if (std::abs(s - rounded) < 1e-12 && rounded >= 0 && rounded <= 1e7) {
        int si = static_cast<int>(rounded);
        return si <= 30 ? harmonic(si) : harmonic_double(si);
    }
    return harmonic_real(s);
}

}  // namespace

double expected_order_stat(const DelayModel& model, int n, double s) {
    if (s < 0 || s >= n) throw ConfigError("order statistic needs 0 <= s < n");
    if (const auto* p = std::get_if<Pareto>(&model.family)) {
        if (p->rho <= 1.0)
            throw InfiniteMeanError("Pareto with rho <= 1 has no finite expected delay");
        double lg = std::lgamma(n + 1.0) - std::lgamma(s + 1.0) +
                    std::lgamma(s + 1.0 - 1.0 / p->rho) - std::lgamma(n + 1.0 - 1.0 / p->rho);
        return p->lambda * std::exp(lg);
    }
    const auto& e = std::get<ShiftedExp>(model.family);
    double hn = n <= 30 ? harmonic(n) : harmonic_double(n);
    return e.gamma_min + e.w * (hn - harmonic_maybe_exact(s));
}

double expected_iteration_delay(const DelayModel& model, int n, int s, double points) {
    double os = expected_order_stat(model, n, static_cast<double>(s));
    return model.scaling == Scaling::data_dependent ? points * model.delta + os : points * os;
}

SchemeComparison scheme1_vs_scheme2(const DelayModel& model, int n, double alpha,
                                    double d_points) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw ConfigError("scheme comparison needs 0 < alpha < 1");
    SchemeComparison cmp;
    cmp.s1 = n * (1.0 - alpha);
    cmp.s2 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * n * (n - 1.0) * (1.0 - alpha)));
    auto delay_at = [&](double s, double points) {
        double os = expected_order_stat(model, n, s);
        return model.scaling == Scaling::data_dependent ? points * model.delta + os : points * os;
    };
    cmp.delay1 = delay_at(cmp.s1, d_points / n);
    cmp.delay2 = delay_at(cmp.s2, 2.0 * d_points / n);

    double one_minus = 1.0 - alpha;
    if (const auto* p = std::get_if<Pareto>(&model.family)) {
        if (model.scaling == Scaling::data_dependent) {
            double root = std::pow(one_minus, -1.0 / (2.0 * p->rho));
            cmp.scheme2_favored = p->lambda * root * (root - 1.0) > d_points / n * model.delta;
        } else {
            cmp.scheme2_favored = std::pow(one_minus, -2.0 / p->rho) > 2.0;
        }
    } else {
        const auto& e = std::get<ShiftedExp>(model.family);
        if (model.scaling == Scaling::data_dependent)
            cmp.scheme2_favored = 0.5 * e.w * std::log(1.0 / one_minus) > d_points / n * model.delta;
        else
            cmp.scheme2_favored = false;  // the uncoded benchmark wins this quadrant
    }
    return cmp;
}

}  // namespace gradcode
