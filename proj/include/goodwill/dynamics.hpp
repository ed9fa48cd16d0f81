#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "goodwill/spectral_basis.hpp"

namespace goodwill {

// Model data for the controlled goodwill equation
//   dx/dt = (Laplacian - rho) x + b(xi) u(t, xi),   Neumann boundary,
// plus the objective weights shared by the solvers.
struct ModelParams {
    double rho = 1.0;        // deterioration rate, 1/time
    double horizon_T = 1.0;  // planning horizon
    double cap_R = 1.0;      // pointwise control cap (GRP units)
    double gamma = 1.0;      // terminal reward / tracking weight
    SpectralField effectiveness_b;  // advertising effectiveness, >= 0 pointwise
    SpectralField x0;               // initial goodwill density
    // When false the Laplacian is dropped and every mode decays at rate rho.
    // Exists for the diffusion-invariance comparison; default is the PDE.
    bool diffusion = true;

    void validate() const;
};

// Advertising effort u(t, xi) >= 0. Two representations:
//  - a closed-form rule t, xi1, xi2 -> u (strategies from the solvers), or
//  - per-mode coefficient samples on a time grid, interpreted as piecewise
//    linear in time between samples.
class ControlSignal {
public:
    using Rule = std::function<double(double t, double xi1, double xi2)>;

    ControlSignal() : ControlSignal(zero()) {}

    static ControlSignal zero();
    static ControlSignal constant(double level);
    static ControlSignal from_rule(Rule rule, std::string label);
    static ControlSignal from_samples(std::vector<double> times,
                                      std::vector<SpectralField> values);

    bool is_sampled() const { return !times_.empty(); }
    const std::string& label() const { return label_; }

    // Sampled representation access; throws unless is_sampled().
    const std::vector<double>& times() const;
    const std::vector<SpectralField>& values() const;

    // Pointwise evaluation. Rules evaluate directly; sampled controls
    // interpolate coefficients in time and synthesize at the point.
    double eval(double t, double xi1, double xi2) const;

    // Coefficients at time t: sampled controls interpolate linearly; rules
    // are projected on the transform's quadrature grid.
    SpectralField coeffs_at(double t, const SpectralTransform& transform) const;

private:
    ControlSignal(Rule rule, std::string label)
        : rule_(std::move(rule)), label_(std::move(label)) {}
    Rule rule_;
    std::string label_;
    std::vector<double> times_;
    std::vector<SpectralField> values_;
};

// Project a control onto per-mode samples over `times` (its own coefficients,
// not b*u). Sampled inputs are re-sampled by linear interpolation.
ControlSignal sample_control(const ControlSignal& u, const SpectralTransform& transform,
                             const std::vector<double>& times);

// a + s*b for two sampled controls on the same grid.
ControlSignal add_scaled(const ControlSignal& a, double s, const ControlSignal& b);

// L2([0,T] x rectangle) norm of a sampled control: piecewise-linear-exact in
// time, Parseval in space.
double control_norm(const ControlSignal& u);

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> states;
};

// True when b is the constant function 1 (only the (0,0) coefficient is
// populated and equals sqrt(L*H)); the control operator is then the identity.
bool is_unit_effectiveness(const SpectralField& b);

// Decay rate of each retained mode under the dynamics: mu_k = lambda_k + rho,
// or uniformly rho when params.diffusion is off. Flat mode order.
std::vector<double> mode_decay_rates(const ModelParams& params,
                                     const DomainSpec& domain);

// Variation-of-constants solve in spectral coordinates. Per mode,
//   x^k(t) = e^{-mu_k t} x^k(0) + integral_0^t e^{-mu_k (t-s)} <b u(s), e_k> ds,
// with the forcing projected at the sample nodes and the convolution done by
// the exact exponential step for piecewise-linear forcing (stiffness-free for
// large mu_k). Trajectory states are reported at `times`; the integration grid
// is the union of `times` with the control's own samples.
Trajectory mild_solve(const ModelParams& params, const ControlSignal& u,
                      const std::vector<double>& times);

// Spectral coefficients of the pointwise product b(xi) * field(xi), computed
// as reconstruct -> multiply -> project on the quadrature grid.
SpectralField multiply_by_b(const ModelParams& params, const SpectralField& field);

// Total goodwill over the region per sample time: sqrt(L*H) * coeff(0,0).
std::vector<double> average_goodwill(const Trajectory& traj);

// Catalog of terminal-utility and effort-cost integrands for the general
// objective. quadratic_half_capped is u^2/2 with feasibility (u in [0,R])
// assumed; evaluation does not clip.
struct ObjectiveRule {
    enum class Kind { zero, linear, quadratic, quadratic_half_capped };
    Kind kind = Kind::zero;
};

// integral phi0(x(T, xi)) dxi  -  integral_0^T integral h0(u) dxi dt,
// space by Gauss-Legendre quadrature, time by trapezoid on traj.times.
double evaluate_objective_general(const ModelParams& params, const Trajectory& traj,
                                  const ControlSignal& u, ObjectiveRule phi0,
                                  ObjectiveRule h0);

}  // namespace goodwill
