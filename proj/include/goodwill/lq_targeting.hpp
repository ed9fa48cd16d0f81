#pragma once

#include <vector>

#include "goodwill/lq_indefinite.hpp"

namespace goodwill {

// Target profile h and the induced forcing f = -A h of the distance variable
// y = h - x, which solves y' = A y - u + f from y(0) = h - x0. Spectrally
// f^k = mu_k h^k.
struct TargetSpec {
    SpectralField target_k;
    SpectralField f;
};

// Affine term r of the tracking feedback u* = P(T-t) y* + r(t). r solves the
// projected backward equation r' = mu_k r + p_k(T-t) (r - f_k), r(T) = 0;
// equivalently eta(t) := r(T-t) obeys eta' = -(mu_k + p_k(t)) eta + p_k(t) f_k
// from eta(0) = 0. The integrating factor of p_k is a denom ratio, so the
// quadrature closes:
//   eta_k(t) = 2 gamma f_k e^{-mu t} (1 - e^{-mu t}) / ((2mu+gamma) - gamma e^{-2mu t}).
struct AdjointModeSolution {
    double mu_k = 1.0;
    double gamma = 1.0;
    double f_k = 0.0;
    double horizon_T = 1.0;
    std::vector<double> grid;     // time grid on [0, T]
    std::vector<double> samples;  // r_k at the grid times; samples.back() == 0

    double eval(double t) const;  // closed form, any t in [0, T]
};

// y0 = target - x0 and f^k = mu_k * target^k (decay rates per the params).
std::pair<SpectralField, SpectralField> to_tracking_frame(const ModelParams& params,
                                                          const SpectralField& target);

// p2 Riccati value at time t: p(0) = gamma, positive and decreasing, never
// blows up.
double riccati_p2_mode(double mu_k, double gamma, double t);

AdjointModeSolution adjoint_r_mode(double mu_k, double gamma, double f_k,
                                   double T, const std::vector<double>& grid);

struct P2Synthesis {
    ControlSignal control;        // sampled u*^k(t) = p_k(T-t) y^k(t) + r_k(t)
    Trajectory y_trajectory;      // distance frame
    Trajectory x_trajectory;      // x = target - y
    double value_formula = 0.0;   // <P(T)y0, y0> + 2<r(0), y0> + int(2<r,f> - |r|^2)
    double value_direct = 0.0;    // J_h evaluated at the synthesized control
    std::vector<RiccatiModeSolution> riccati;  // flat mode order
    std::vector<AdjointModeSolution> adjoint;
};

// Feedback synthesis for the tracking problem, minimizing
//   J_h(u) = gamma |x(T) - target|^2 + integral ||u||^2 dt
// with unit effectiveness. Unconditionally well-posed. The closed-loop mode
//   dy^k/dt = (-mu_k - p_k(T-t)) y^k - r_k(t) + f_k
// is integrated exactly through the denom-ratio propagator. Both value routes
// are returned and cross-checked (throws on gross disagreement).
P2Synthesis synthesize_p2(const ModelParams& params, const SpectralField& target,
                          int time_steps = 200);

// gamma |x(T) - target|^2 + integral ||u||^2 dt via mild_solve and Parseval.
double evaluate_J_h(const ModelParams& params, const SpectralField& target,
                    const ControlSignal& u, int time_steps = 200);

}  // namespace goodwill
