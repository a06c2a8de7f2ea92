#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace ipalm {

// How the inertial coefficients and step parameters are chosen for a block.
//
// - StaticNonconvex: alpha = alpha_bar, beta = beta_bar every iteration; needs
//   alpha_bar < (1 - eps)/2. Valid for any proper lsc f_i.
// - StaticConvex: same coefficients, tighter step rule for convex f_i; needs
//   alpha_bar < 1 - eps.
// - Dynamic: alpha_k = beta_k = (k-1)/(k+2) with tau = L. Heuristic: no
//   convergence guarantee and no Lyapunov weight.
enum class ScheduleType { StaticNonconvex, StaticConvex, Dynamic };

std::string to_string(ScheduleType type);
ScheduleType parse_schedule_type(const std::string& name);

struct ScheduleKind {
    ScheduleType type = ScheduleType::StaticNonconvex;
    double alpha_bar = 0.0;
    double beta_bar = 0.0;
    double eps = 0.0;

    static ScheduleKind static_nonconvex(double alpha_bar, double beta_bar, double eps = 0.0);
    static ScheduleKind static_convex(double alpha_bar, double beta_bar, double eps = 0.0);
    static ScheduleKind dynamic();

    bool is_static() const noexcept { return type != ScheduleType::Dynamic; }
    bool convex_rule() const noexcept { return type == ScheduleType::StaticConvex; }

    // Throws ParameterError when the bounds of the kind are violated.
    void validate() const;
};

struct InertialCoefficients {
    double alpha;
    double beta;
};

// Coefficients for iteration k (k >= 1).
InertialCoefficients inertial_coefficients(const ScheduleKind& kind, std::size_t k);

// (k-1)/(k+2) for k >= 1.
double dynamic_coeff(std::size_t k);

// Lyapunov weight delta* for the given inertia bounds and Lipschitz bound.
//   nonconvex: (a + b) * lambda / (1 - eps - 2a)
//   convex:    (a + 2b) * lambda / (2 (1 - eps - a))
double delta_star(double alpha_bar, double beta_bar, double eps, double lambda_plus, bool convex);

// tau* = ((1 + eps) delta + (1 + beta) L) / (1 - alpha)   (nonconvex)
// tau* = ((1 + eps) delta + (1 + beta) L) / (2 - alpha)   (convex)
double tau_for_delta(double alpha, double beta, double delta, double lipschitz, double eps, bool convex);

struct StepParameters {
    double tau;
    std::optional<double> delta;
};

// Step parameter for the instantaneous (alpha, beta, L). delta is computed
// from the same instantaneous values; Dynamic returns tau = L and no delta.
// With eps = 0 this reduces to tau = (1+2b)/(1-2a) L and (1+2b)/(2(1-a)) L.
StepParameters tau_step(double alpha, double beta, double lipschitz, const ScheduleKind& kind);

struct LemmaGH {
    double g;
    double h;
};

// g = tau (1 - alpha) - (1 + beta) L - delta, h = delta - tau alpha - L beta.
// With convex = true the first term uses (2 - alpha), the coefficient that the
// tightened proximal inequality produces for convex f_i.
LemmaGH lemma_gh(double alpha, double beta, double delta, double tau, double lipschitz, bool convex = false);

}  // namespace ipalm
