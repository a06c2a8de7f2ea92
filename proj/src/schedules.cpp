#include "ipalm/schedules.hpp"

#include <cmath>
#include <sstream>

#include "ipalm/errors.hpp"

namespace ipalm {

std::string to_string(ScheduleType type) {
    switch (type) {
        case ScheduleType::StaticNonconvex: return "static-nc";
        case ScheduleType::StaticConvex: return "static-c";
        case ScheduleType::Dynamic: return "dynamic";
    }
    return "unknown";
}

ScheduleType parse_schedule_type(const std::string& name) {
    if (name == "static-nc") return ScheduleType::StaticNonconvex;
    if (name == "static-c") return ScheduleType::StaticConvex;
    if (name == "dynamic") return ScheduleType::Dynamic;
    throw ParameterError("unknown schedule '" + name + "' (expected static-nc, static-c or dynamic)");
}

ScheduleKind ScheduleKind::static_nonconvex(double alpha_bar, double beta_bar, double eps) {
    ScheduleKind kind{ScheduleType::StaticNonconvex, alpha_bar, beta_bar, eps};
    kind.validate();
    return kind;
}

ScheduleKind ScheduleKind::static_convex(double alpha_bar, double beta_bar, double eps) {
    ScheduleKind kind{ScheduleType::StaticConvex, alpha_bar, beta_bar, eps};
    kind.validate();
    return kind;
}

ScheduleKind ScheduleKind::dynamic() {
    return ScheduleKind{ScheduleType::Dynamic, 0.0, 0.0, 0.0};
}

void ScheduleKind::validate() const {
    if (type == ScheduleType::Dynamic) return;
    std::ostringstream msg;
    if (!(eps >= 0.0 && eps < 1.0)) {
        msg << "epsilon must lie in [0, 1), got " << eps;
        throw ParameterError(msg.str());
    }
    if (!(alpha_bar >= 0.0) || !(beta_bar >= 0.0) || !(beta_bar <= 1.0)) {
        msg << "inertial bounds must satisfy alpha_bar >= 0 and 0 <= beta_bar <= 1, got alpha_bar="
            << alpha_bar << " beta_bar=" << beta_bar;
        throw ParameterError(msg.str());
    }
    if (type == ScheduleType::StaticNonconvex && !(alpha_bar < 0.5 * (1.0 - eps))) {
        msg << "nonconvex schedule needs alpha_bar < (1 - eps)/2 = " << 0.5 * (1.0 - eps)
            << ", got alpha_bar=" << alpha_bar;
        throw ParameterError(msg.str());
    }
    if (type == ScheduleType::StaticConvex && !(alpha_bar < 1.0 - eps)) {
        msg << "convex schedule needs alpha_bar < 1 - eps = " << 1.0 - eps << ", got alpha_bar=" << alpha_bar;
        throw ParameterError(msg.str());
    }
}

double dynamic_coeff(std::size_t k) {
    if (k == 0) throw ParameterError("dynamic_coeff: iteration index starts at 1");
    const double kk = static_cast<double>(k);
    return (kk - 1.0) / (kk + 2.0);
}

InertialCoefficients inertial_coefficients(const ScheduleKind& kind, std::size_t k) {
    if (kind.type == ScheduleType::Dynamic) {
        const double c = dynamic_coeff(k);
        return {c, c};
    }
    return {kind.alpha_bar, kind.beta_bar};
}

double delta_star(double alpha_bar, double beta_bar, double eps, double lambda_plus, bool convex) {
    if (!(lambda_plus > 0.0)) {
        throw ParameterError("delta_star: Lipschitz bound must be positive");
    }
    std::ostringstream msg;
    if (convex) {
        const double denom = 1.0 - eps - alpha_bar;
        if (!(denom > 0.0)) {
            msg << "delta_star: convex bound alpha_bar < 1 - eps violated (alpha_bar=" << alpha_bar
                << ", eps=" << eps << ")";
            throw ParameterError(msg.str());
        }
        return (alpha_bar + 2.0 * beta_bar) * lambda_plus / (2.0 * denom);
    }
    const double denom = 1.0 - eps - 2.0 * alpha_bar;
    if (!(denom > 0.0)) {
        msg << "delta_star: bound alpha_bar < (1 - eps)/2 violated (alpha_bar=" << alpha_bar
            << ", eps=" << eps << ")";
        throw ParameterError(msg.str());
    }
    return (alpha_bar + beta_bar) * lambda_plus / denom;
}

double tau_for_delta(double alpha, double beta, double delta, double lipschitz, double eps, bool convex) {
    const double numer = (1.0 + eps) * delta + (1.0 + beta) * lipschitz;
    return numer / ((convex ? 2.0 : 1.0) - alpha);
}

StepParameters tau_step(double alpha, double beta, double lipschitz, const ScheduleKind& kind) {
    if (!(lipschitz > 0.0)) throw ParameterError("tau_step: Lipschitz modulus must be positive");
    if (kind.type == ScheduleType::Dynamic) return {lipschitz, std::nullopt};
    const bool convex = kind.convex_rule();
    if (!convex && !(alpha < 0.5 * (1.0 - kind.eps))) {
        std::ostringstream msg;
        msg << "tau_step: nonconvex rule needs alpha < (1 - eps)/2, got alpha=" << alpha;
        throw ParameterError(msg.str());
    }
    const double delta = delta_star(alpha, beta, kind.eps, lipschitz, convex);
    return {tau_for_delta(alpha, beta, delta, lipschitz, kind.eps, convex), delta};
}

LemmaGH lemma_gh(double alpha, double beta, double delta, double tau, double lipschitz, bool convex) {
    const double g = tau * ((convex ? 2.0 : 1.0) - alpha) - (1.0 + beta) * lipschitz - delta;
    const double h = delta - tau * alpha - lipschitz * beta;
    return {g, h};
}

}  // namespace ipalm
