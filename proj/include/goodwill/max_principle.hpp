#pragma once

#include <optional>
#include <utility>

#include "goodwill/dynamics.hpp"

namespace goodwill {

// Costate of the maximum principle, p' + A p = 0 backward from p(T).
// For the linear terminal utility integral x(T) the terminal gradient is the
// constant 1 and p(t, xi) = e^{-rho (T-t)} everywhere; a general terminal
// field decays per mode at rate mu_k backward in time.
struct DualArc {
    double rho = 1.0;
    double horizon_T = 1.0;
    std::optional<SpectralField> terminal;  // nullopt: terminal = constant 1

    static DualArc constant_one(double rho, double horizon_T) {
        return {rho, horizon_T, std::nullopt};
    }
};

// Effort-cost shape on [0, R]: u^2/2 (quadratic_capped) or u (linear_capped),
// +infinity outside the cap.
struct CostRule {
    enum class Tag { quadratic_capped, linear_capped };
    Tag tag = Tag::quadratic_capped;
    double cap_R = 1.0;
};

// Fenchel conjugate of h(u) = u^2/2 on [0, R]:
//   h*(zeta) = 0 for zeta < 0, zeta^2/2 on [0, R], zeta R - R^2/2 beyond.
// Convex, nondecreasing, continuous (the cap branch is tangent at zeta = R).
double conjugate_quadratic_capped(double zeta, double R);

// Maximizer of zeta*u - u^2/2 over [0, R]: clamp(zeta, 0, R).
double argmax_quadratic_capped(double zeta, double R);

// Evaluate the dual arc at (t, xi).
double dual_arc_eval(const DualArc& dual, double t, double xi1, double xi2);

// Optimal strategy for linear terminal utility and quadratic effort cost:
//   u*(t, xi) = clamp(b(xi) e^{-rho (T-t)}, 0, R).
// Zero wherever b vanishes; the cap binds where b e^{-rho(T-t)} >= R.
ControlSignal strategy_linear_reward_quadratic_cost(const ModelParams& params);

// Bang-bang strategy for linear terminal utility and linear effort cost:
//   u* = R where b(xi) p(t, xi) > 1, else 0 (ties resolve to 0).
// For constant b > 1 the switch happens at t = T - ln(b)/rho.
ControlSignal strategy_linear_reward_linear_cost(const ModelParams& params,
                                                 const DualArc& dual);

struct BudgetSolution {
    ControlSignal u;
    double lambda = 0.0;
};

// Budget-constrained variant (linear terminal utility, quadratic cost, no
// cap): minimize -integral x(T) + lambda ||u||^2 subject to the total spend
// integral_0^T integral u^2 = M. The inner minimizer is u = g / (2 lambda)
// with g(t, xi) = b(xi) e^{-rho (T-t)}, and the multiplier pinning the budget
// is lambda = ||g|| / (2 sqrt(M)). Throws InfeasibleError when b is
// identically zero (no control reaches the state).
BudgetSolution solve_budget_constrained(const ModelParams& params, double M);

}  // namespace goodwill
