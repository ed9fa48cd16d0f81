#include "goodwill/max_principle.hpp"

#include <algorithm>
#include <cmath>

#include "goodwill/errors.hpp"

namespace goodwill {

double conjugate_quadratic_capped(double zeta, double R) {
    if (!(R > 0.0)) throw ConfigError("conjugate: cap R must be positive");
    if (zeta < 0.0) return 0.0;
    if (zeta <= R) return 0.5 * zeta * zeta;
    return zeta * R - 0.5 * R * R;
}

double argmax_quadratic_capped(double zeta, double R) {
    if (!(R > 0.0)) throw ConfigError("argmax: cap R must be positive");
    return std::clamp(zeta, 0.0, R);
}

double dual_arc_eval(const DualArc& dual, double t, double xi1, double xi2) {
    if (t < -1e-12 || t > dual.horizon_T * (1.0 + 1e-12))
        throw ConfigError("dual arc evaluated outside [0, T]");
    if (!dual.terminal) return std::exp(-dual.rho * (dual.horizon_T - t));
    const SpectralField& pT = *dual.terminal;
    const DomainSpec& d = pT.domain();
    double acc = 0.0;
    for (int m = 0; m <= d.modes_M; ++m)
        for (int n = 0; n <= d.modes_N; ++n) {
            const double c = pT.coeff(m, n);
            if (c == 0.0) continue;
            const double mu = a_eigenvalue(d, {m, n}, dual.rho);
            acc += c * std::exp(-mu * (dual.horizon_T - t)) *
                   eigenfunction_eval(d, {m, n}, xi1, xi2);
        }
    return acc;
}

ControlSignal strategy_linear_reward_quadratic_cost(const ModelParams& params) {
    params.validate();
    const SpectralField b = params.effectiveness_b;
    const double rho = params.rho, T = params.horizon_T, R = params.cap_R;
    return ControlSignal::from_rule(
        [b, rho, T, R](double t, double xi1, double xi2) {
            const double bv = reconstruct(b, {{xi1, xi2}})[0];
            return std::clamp(bv * std::exp(-rho * (T - t)), 0.0, R);
        },
        "quadratic-cost strategy");
}

ControlSignal strategy_linear_reward_linear_cost(const ModelParams& params,
                                                 const DualArc& dual) {
    params.validate();
    const SpectralField b = params.effectiveness_b;
    const double R = params.cap_R;
    const DualArc arc = dual;
    return ControlSignal::from_rule(
        [b, R, arc](double t, double xi1, double xi2) {
            const double bv = reconstruct(b, {{xi1, xi2}})[0];
            return bv * dual_arc_eval(arc, t, xi1, xi2) > 1.0 ? R : 0.0;
        },
        "bang-bang strategy");
}

BudgetSolution solve_budget_constrained(const ModelParams& params, double M) {
    params.validate();
    if (!(M > 0.0)) throw ConfigError("budget M must be positive");
    const double rho = params.rho, T = params.horizon_T;
    // ||g||^2 = integral_0^T e^{-2 rho (T-t)} dt * |b|^2 = C_{rho,T} |b|^2.
    const double C = (1.0 - std::exp(-2.0 * rho * T)) / (2.0 * rho);
    const double b_norm_sq = params.effectiveness_b.norm_sq();
    const DomainSpec& d = params.effectiveness_b.domain();
    if (b_norm_sq <= 1e-24 * std::max(1.0, d.length_L * d.height_H))
        throw InfeasibleError("budget problem infeasible: effectiveness b is identically zero");
    const double lambda = std::sqrt(C * b_norm_sq) / (2.0 * std::sqrt(M));
    const SpectralField b = params.effectiveness_b;
    ControlSignal u = ControlSignal::from_rule(
        [b, rho, T, lambda](double t, double xi1, double xi2) {
            const double bv = reconstruct(b, {{xi1, xi2}})[0];
            return bv * std::exp(-rho * (T - t)) / (2.0 * lambda);
        },
        "budget strategy");
    return {std::move(u), lambda};
}

}  // namespace goodwill
