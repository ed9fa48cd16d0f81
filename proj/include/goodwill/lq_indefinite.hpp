#pragma once

#include <optional>
#include <vector>

#include "goodwill/dynamics.hpp"

namespace goodwill {

// Closed-form solution of one projected Riccati mode
//   p' = -2 mu p - p^2,  p(0) = -gamma (p1) or +gamma (p2).
// Both cases share p(t) = -2mu + [ (2mu)^{-1} + C e^{-2mu t} ]^{-1}; the
// implementation evaluates the algebraically identical scaled form
//   p1: p(t) = -2 mu gamma e^{-2mu t} / ((2mu - gamma) + gamma e^{-2mu t})
//   p2: p(t) = +2 mu gamma e^{-2mu t} / ((2mu + gamma) - gamma e^{-2mu t})
// which never overflows. The p1 denominator loses positivity at
//   t* = ln(gamma / (gamma - 2mu)) / (2mu)   when gamma > 2mu,
// the finite-time Riccati escape; p2 never blows up.
struct RiccatiModeSolution {
    enum class Sign { p1_negative, p2_positive };

    double mu_k = 1.0;
    double gamma = 1.0;
    double C_k = 0.0;  // integration constant of the unscaled form
    Sign sign = Sign::p1_negative;
    double horizon_T = 1.0;
    bool valid_on_horizon = true;
    std::optional<double> blowup_time;  // set for p1 with gamma > 2 mu

    static RiccatiModeSolution p1(double mu, double gamma, double horizon_T);
    static RiccatiModeSolution p2(double mu, double gamma, double horizon_T);

    // p(t); throws BlowUpError at or past the escape time. t = 0 returns the
    // Cauchy datum -gamma / +gamma exactly.
    double eval(double t) const;

    // Scaled denominator (2mu -+ gamma) +- gamma e^{-2mu t}; positive on the
    // validity interval. exp(integral_a^b p) = denom(a)/denom(b) * ... is
    // assembled by the synthesizers through denom ratios.
    double denom(double t) const;
};

struct FeedbackLaw {
    std::vector<RiccatiModeSolution> mode_solutions;  // flat mode order
    double horizon_T = 1.0;
};

// Well-posedness margin of the indefinite problem:
//   eps = 1 - (gamma / 2 rho) (1 - e^{-2 rho T}) = 1 - gamma C_{rho,T}.
// The problem is accepted iff eps > 0.
double wellposedness_margin(double gamma, double rho, double T);

// C_{rho,T} = (1 - e^{-2 rho T}) / (2 rho).
double horizon_factor(double rho, double T);

// p1 Riccati value at time t; errors: DegenerateError when gamma == 2 mu
// (the integration constant is undefined), BlowUpError when the denominator
// has a root in [0, t].
double riccati_p1_mode(double mu_k, double gamma, double t);

struct P1Synthesis {
    FeedbackLaw law;
    Trajectory trajectory;   // closed-loop optimal state
    ControlSignal control;   // sampled u*^k(t) = -p_k(T-t) x*^k(t)
    double value = 0.0;      // sum_k p_k(T) x0_k^2
};

// Closed-loop synthesis for the indefinite problem, minimizing
//   J_i(u) = -gamma |x(T)|^2 + integral_0^T |u(t)|^2 dt
// under dx/dt = A x + u (unit effectiveness required). Per mode the optimal
// state is x^k(t) = x^k(0) e^{-mu_k t} denom_k(T-t)/denom_k(T), which grows
// over the free decay since -p_k > 0. Errors: IllPosedError when the margin
// is nonpositive, BlowUpError if any retained mode escapes inside [0, T].
P1Synthesis synthesize_p1(const ModelParams& params, const DomainSpec& domain,
                          int time_steps = 200);

// J_i(u) = -gamma |x(T)|^2 + integral |u|^2 dt via mild_solve and Parseval.
// Sampled controls integrate their piecewise-linear interpolant exactly;
// rules are sampled on `time_steps` first.
double evaluate_J_i(const ModelParams& params, const ControlSignal& u,
                    int time_steps = 200);

struct CoercivityWitness {
    ControlSignal v;        // v(s, xi) = e^{-rho (T-s)}, spatially constant
    double quadform = 0.0;  // <Psi v, v> = C_{rho,T} L H (1 - gamma C_{rho,T})
};

// Witness control for the coercivity boundary of J_i's quadratic form
// <Psi u, u> = ||u||^2 - gamma |L_T u|^2: the sign of the returned quadform
// flips exactly at gamma * C_{rho,T} = 1.
CoercivityWitness coercivity_witness(const DomainSpec& domain, double gamma,
                                     double rho, double T);

}  // namespace goodwill
