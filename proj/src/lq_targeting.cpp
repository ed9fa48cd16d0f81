#include "goodwill/lq_targeting.hpp"

#include <algorithm>
#include <cmath>

#include "goodwill/errors.hpp"

namespace goodwill {

namespace {

double eta_closed_form(double mu, double gamma, double f, double t) {
    const double e = std::exp(-mu * t);
    const double denom = (2.0 * mu + gamma) - gamma * e * e;
    return 2.0 * gamma * f * e * (1.0 - e) / denom;
}

// Optimal distance trajectory of the closed loop
//   dy/dt = (-mu - p(T-t)) y - r(t) + f,  y(0) = y0,
// in closed form. The propagator over [0,t] is e^{-mu t} denom(T-t)/denom(T)
// and the forcing integral collapses because denom' is again exponential:
//   y(t) = y0 e^{-mu t} R(t) + (f/mu) [1 - e^{-mu t} R(t)
//          - gamma (e^{-mu (T-t)} - e^{-mu (T+t)}) / denom(T)],
// with R(t) = denom(T-t)/denom(T).
double y_closed_form(const RiccatiModeSolution& sol, double y0, double f, double t) {
    const double mu = sol.mu_k, gamma = sol.gamma, T = sol.horizon_T;
    const double ratio = sol.denom(T - t) / sol.denom(T);
    const double decay = std::exp(-mu * t) * ratio;
    const double forced =
        (f / mu) * (1.0 - decay -
                    gamma * (std::exp(-mu * (T - t)) - std::exp(-mu * (T + t))) /
                        sol.denom(T));
    return y0 * decay + forced;
}

}  // namespace

double AdjointModeSolution::eval(double t) const {
    if (t < 0.0 || t > horizon_T * (1.0 + 1e-12))
        throw ConfigError("adjoint mode evaluated outside [0, T]");
    return eta_closed_form(mu_k, gamma, f_k, horizon_T - t);
}

std::pair<SpectralField, SpectralField> to_tracking_frame(const ModelParams& params,
                                                          const SpectralField& target) {
    params.validate();
    if (!(target.domain() == params.x0.domain()))
        throw ConfigError("target and x0 live on different domains");
    const DomainSpec& domain = target.domain();
    const std::vector<double> mu = mode_decay_rates(params, domain);
    SpectralField y0 = target;
    y0 -= params.x0;
    SpectralField f(domain);
    for (int k = 0; k < domain.num_modes(); ++k)
        f.coeffs()[k] = mu[k] * target.coeffs()[k];
    return {std::move(y0), std::move(f)};
}

double riccati_p2_mode(double mu_k, double gamma, double t) {
    return RiccatiModeSolution::p2(mu_k, gamma, t).eval(t);
}

AdjointModeSolution adjoint_r_mode(double mu_k, double gamma, double f_k,
                                   double T, const std::vector<double>& grid) {
    if (grid.size() < 2 || grid.front() > 1e-12 ||
        std::abs(grid.back() - T) > 1e-9 * std::max(1.0, T))
        throw ConfigError("adjoint grid must cover [0, T]");
    AdjointModeSolution sol;
    sol.mu_k = mu_k;
    sol.gamma = gamma;
    sol.f_k = f_k;
    sol.horizon_T = T;
    sol.grid = grid;
    sol.samples.reserve(grid.size());
    for (double t : grid) sol.samples.push_back(eta_closed_form(mu_k, gamma, f_k, T - t));
    return sol;
}

P2Synthesis synthesize_p2(const ModelParams& params, const SpectralField& target,
                          int time_steps) {
    params.validate();
    if (!is_unit_effectiveness(params.effectiveness_b))
        throw ConfigError("synthesize_p2 requires unit effectiveness (B = identity)");
    const DomainSpec& domain = params.x0.domain();
    if (!(target.domain() == domain))
        throw ConfigError("target domain does not match x0");
    const double T = params.horizon_T, gamma = params.gamma;
    const std::vector<double> mu = mode_decay_rates(params, domain);
    auto [y0, f] = to_tracking_frame(params, target);

    const std::vector<double> times = uniform_grid(T, time_steps);
    P2Synthesis out;
    out.riccati.reserve(domain.num_modes());
    out.adjoint.reserve(domain.num_modes());
    for (int k = 0; k < domain.num_modes(); ++k) {
        out.riccati.push_back(RiccatiModeSolution::p2(mu[k], gamma, T));
        out.adjoint.push_back(adjoint_r_mode(mu[k], gamma, f.coeffs()[k], T, times));
    }

    auto control_at = [&](double t) {
        SpectralField u(domain);
        for (int k = 0; k < domain.num_modes(); ++k) {
            const double yk =
                y_closed_form(out.riccati[k], y0.coeffs()[k], f.coeffs()[k], t);
            u.coeffs()[k] = out.riccati[k].eval(T - t) * yk + out.adjoint[k].eval(t);
        }
        return u;
    };

    std::vector<SpectralField> y_states, x_states, controls;
    y_states.reserve(times.size());
    x_states.reserve(times.size());
    controls.reserve(times.size());
    for (double t : times) {
        SpectralField y(domain), x(domain);
        for (int k = 0; k < domain.num_modes(); ++k) {
            const double yk =
                y_closed_form(out.riccati[k], y0.coeffs()[k], f.coeffs()[k], t);
            y.coeffs()[k] = yk;
            x.coeffs()[k] = target.coeffs()[k] - yk;
        }
        y_states.push_back(std::move(y));
        x_states.push_back(std::move(x));
        controls.push_back(control_at(t));
    }
    y_states.front() = y0;
    x_states.front() = params.x0;

    out.y_trajectory = {times, std::move(y_states)};
    out.x_trajectory = {times, std::move(x_states)};
    out.control = ControlSignal::from_samples(times, std::move(controls));

    // Value, route 1: <P(T) y0, y0> + 2 <r(0), y0> + int_0^T (2<r,f> - |r|^2).
    double value = 0.0;
    for (int k = 0; k < domain.num_modes(); ++k) {
        const double y0k = y0.coeffs()[k];
        value += out.riccati[k].eval(T) * y0k * y0k;
        value += 2.0 * out.adjoint[k].eval(0.0) * y0k;
    }
    for (int k = 0; k < domain.num_modes(); ++k) {
        const double fk = f.coeffs()[k];
        const AdjointModeSolution& r = out.adjoint[k];
        if (fk == 0.0) continue;  // r is then identically zero
        value += integrate_simpson(
            [&](double t) {
                const double rk = r.eval(t);
                return 2.0 * rk * fk - rk * rk;
            },
            0.0, T, 20000);
    }
    out.value_formula = value;

    // Value, route 2: direct objective at the synthesized control. Stiff
    // modes put a boundary layer of width 1/(2 mu) before T, so the feedback
    // is re-sampled on a grid that resolves it, independent of the export grid.
    const double mu_max = *std::max_element(mu.begin(), mu.end());
    const int fine_steps = std::clamp(static_cast<int>(std::ceil(10.0 * mu_max * T)),
                                      time_steps, 50000);
    const std::vector<double> fine = uniform_grid(T, fine_steps);
    std::vector<SpectralField> fine_controls;
    fine_controls.reserve(fine.size());
    for (double t : fine) fine_controls.push_back(control_at(t));
    out.value_direct = evaluate_J_h(
        params, target, ControlSignal::from_samples(fine, std::move(fine_controls)),
        fine_steps);

    const double scale = std::max(1.0, std::abs(out.value_formula));
    if (std::abs(out.value_formula - out.value_direct) > 1e-4 * scale)
        throw Error("tracking value mismatch: formula " +
                    std::to_string(out.value_formula) + " vs direct " +
                    std::to_string(out.value_direct));
    return out;
}

double evaluate_J_h(const ModelParams& params, const SpectralField& target,
                    const ControlSignal& u, int time_steps) {
    params.validate();
    const DomainSpec& domain = params.x0.domain();
    if (!(target.domain() == domain))
        throw ConfigError("target domain does not match x0");
    ControlSignal us = u;
    if (!u.is_sampled()) {
        SpectralTransform transform(domain);
        us = sample_control(u, transform, uniform_grid(params.horizon_T, time_steps));
    }
    Trajectory traj = mild_solve(params, us, us.times());
    SpectralField miss = traj.states.back();
    miss -= target;
    const double effort = control_norm(us);
    return params.gamma * miss.norm_sq() + effort * effort;
}

}  // namespace goodwill
