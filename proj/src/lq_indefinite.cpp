#include "goodwill/lq_indefinite.hpp"

#include <cmath>
#include <string>

#include "goodwill/errors.hpp"

namespace goodwill {

namespace {

void check_mode_params(double mu, double gamma) {
    if (!(mu > 0.0)) throw ConfigError("Riccati mode: mu_k must be positive");
    if (!(gamma > 0.0)) throw ConfigError("Riccati mode: gamma must be positive");
}

}  // namespace

RiccatiModeSolution RiccatiModeSolution::p1(double mu, double gamma, double horizon_T) {
    check_mode_params(mu, gamma);
    if (std::abs(2.0 * mu - gamma) <= 1e-12 * (2.0 * mu + gamma))
        throw DegenerateError("gamma == 2 mu_k: the p1 integration constant C_k is undefined");
    RiccatiModeSolution s;
    s.mu_k = mu;
    s.gamma = gamma;
    s.C_k = gamma / (2.0 * mu * (2.0 * mu - gamma));
    s.sign = Sign::p1_negative;
    s.horizon_T = horizon_T;
    if (gamma > 2.0 * mu) {
        s.blowup_time = std::log(gamma / (gamma - 2.0 * mu)) / (2.0 * mu);
        s.valid_on_horizon = *s.blowup_time > horizon_T;
    } else {
        s.valid_on_horizon = true;
    }
    return s;
}

RiccatiModeSolution RiccatiModeSolution::p2(double mu, double gamma, double horizon_T) {
    check_mode_params(mu, gamma);
    RiccatiModeSolution s;
    s.mu_k = mu;
    s.gamma = gamma;
    s.C_k = -gamma / (2.0 * mu * (2.0 * mu + gamma));
    s.sign = Sign::p2_positive;
    s.horizon_T = horizon_T;
    s.valid_on_horizon = true;
    return s;
}

double RiccatiModeSolution::denom(double t) const {
    const double e = std::exp(-2.0 * mu_k * t);
    return sign == Sign::p1_negative ? (2.0 * mu_k - gamma) + gamma * e
                                     : (2.0 * mu_k + gamma) - gamma * e;
}

double RiccatiModeSolution::eval(double t) const {
    if (t < 0.0) throw ConfigError("Riccati mode evaluated at negative time");
    if (t == 0.0) return sign == Sign::p1_negative ? -gamma : gamma;
    const double d = denom(t);
    if (sign == Sign::p1_negative && d <= 0.0)
        throw BlowUpError("p1 Riccati mode escapes before t=" + std::to_string(t) +
                              " (escape at t*=" +
                              std::to_string(blowup_time ? *blowup_time : t) + ")",
                          blowup_time ? *blowup_time : t);
    const double num = 2.0 * mu_k * gamma * std::exp(-2.0 * mu_k * t);
    return sign == Sign::p1_negative ? -num / d : num / d;
}

double horizon_factor(double rho, double T) {
    if (!(rho > 0.0) || !(T > 0.0))
        throw ConfigError("horizon factor needs rho > 0 and T > 0");
    return (1.0 - std::exp(-2.0 * rho * T)) / (2.0 * rho);
}

double wellposedness_margin(double gamma, double rho, double T) {
    if (!(gamma > 0.0)) throw ConfigError("margin: gamma must be positive");
    return 1.0 - gamma * horizon_factor(rho, T);
}

double riccati_p1_mode(double mu_k, double gamma, double t) {
    return RiccatiModeSolution::p1(mu_k, gamma, t).eval(t);
}

P1Synthesis synthesize_p1(const ModelParams& params, const DomainSpec& domain,
                          int time_steps) {
    params.validate();
    domain.validate();
    if (!(params.x0.domain() == domain))
        throw ConfigError("synthesize_p1: x0 domain does not match the requested domain");
    if (!is_unit_effectiveness(params.effectiveness_b))
        throw ConfigError("synthesize_p1 requires unit effectiveness (B = identity)");
    const double T = params.horizon_T, gamma = params.gamma;
    const double margin = wellposedness_margin(gamma, params.rho, T);
    if (!(margin > 0.0))
        throw IllPosedError("indefinite problem ill-posed: margin = " +
                                std::to_string(margin) + " <= 0",
                            margin);

    const std::vector<double> mu = mode_decay_rates(params, domain);
    P1Synthesis out;
    out.law.horizon_T = T;
    out.law.mode_solutions.reserve(domain.num_modes());
    for (int k = 0; k < domain.num_modes(); ++k) {
        RiccatiModeSolution sol = RiccatiModeSolution::p1(mu[k], gamma, T);
        if (!sol.valid_on_horizon)
            throw BlowUpError("mode " + std::to_string(k) +
                                  " escapes inside the horizon despite the margin check",
                              sol.blowup_time ? *sol.blowup_time : T);
        out.law.mode_solutions.push_back(sol);
    }

    const std::vector<double> times = uniform_grid(T, time_steps);
    std::vector<SpectralField> states, controls;
    states.reserve(times.size());
    controls.reserve(times.size());
    for (double t : times) {
        SpectralField x(domain), u(domain);
        for (int k = 0; k < domain.num_modes(); ++k) {
            const RiccatiModeSolution& sol = out.law.mode_solutions[k];
            const double xk = params.x0.coeffs()[k] * std::exp(-mu[k] * t) *
                              sol.denom(T - t) / sol.denom(T);
            x.coeffs()[k] = xk;
            u.coeffs()[k] = -sol.eval(T - t) * xk;
        }
        states.push_back(std::move(x));
        controls.push_back(std::move(u));
    }
    // states[0] must hold x0 bit-for-bit; the ratio denom(T)/denom(T) == 1
    // guarantees it, but assign directly to be exact.
    states.front() = params.x0;

    out.trajectory.times = times;
    out.trajectory.states = std::move(states);
    out.control = ControlSignal::from_samples(times, std::move(controls));
    out.value = 0.0;
    for (int k = 0; k < domain.num_modes(); ++k) {
        const double x0k = params.x0.coeffs()[k];
        out.value += out.law.mode_solutions[k].eval(T) * x0k * x0k;
    }
    return out;
}

double evaluate_J_i(const ModelParams& params, const ControlSignal& u,
                    int time_steps) {
    params.validate();
    const DomainSpec& domain = params.x0.domain();
    ControlSignal us = u;
    if (!u.is_sampled()) {
        SpectralTransform transform(domain);
        us = sample_control(u, transform, uniform_grid(params.horizon_T, time_steps));
    }
    Trajectory traj = mild_solve(params, us, us.times());
    const double xT_sq = traj.states.back().norm_sq();
    const double effort = control_norm(us);
    return -params.gamma * xT_sq + effort * effort;
}

CoercivityWitness coercivity_witness(const DomainSpec& domain, double gamma,
                                     double rho, double T) {
    domain.validate();
    const double C = horizon_factor(rho, T);
    const double area = domain.length_L * domain.height_H;
    CoercivityWitness w;
    w.v = ControlSignal::from_rule(
        [rho, T](double s, double, double) { return std::exp(-rho * (T - s)); },
        "coercivity witness");
    w.quadform = C * area * (1.0 - gamma * C);
    return w;
}

}  // namespace goodwill
