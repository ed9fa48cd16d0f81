#include "goodwill/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "goodwill/errors.hpp"

namespace goodwill {

bool is_unit_effectiveness(const SpectralField& b) {
    const double area_c = std::sqrt(b.domain().length_L * b.domain().height_H);
    const double tol = 1e-13 * area_c;
    if (std::abs(b.coeff(0, 0) - area_c) > tol) return false;
    for (int k = 1; k < b.domain().num_modes(); ++k)
        if (std::abs(b.coeffs()[k]) > tol) return false;
    return true;
}

std::vector<double> mode_decay_rates(const ModelParams& params,
                                     const DomainSpec& domain) {
    std::vector<double> mu(domain.num_modes());
    for (int m = 0; m <= domain.modes_M; ++m)
        for (int n = 0; n <= domain.modes_N; ++n)
            mu[domain.flat_index(m, n)] =
                params.diffusion ? a_eigenvalue(domain, {m, n}, params.rho) : params.rho;
    return mu;
}

namespace {

std::vector<double> merge_grids(const std::vector<double>& a,
                                const std::vector<double>& b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Index of the interval [times[i], times[i+1]] containing t (clamped).
std::size_t locate(const std::vector<double>& times, double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = it - times.begin();
    if (i == 0) return 0;
    if (i >= times.size()) return times.size() - 2;
    return i - 1;
}

void check_sampled_on_horizon(const ControlSignal& u, double T) {
    const auto& t = u.times();
    if (std::abs(t.front()) > 1e-12 * std::max(1.0, T) ||
        std::abs(t.back() - T) > 1e-9 * std::max(1.0, T))
        throw ConfigError("sampled control grid does not span [0, T]");
}

}  // namespace

void ModelParams::validate() const {
    if (!(rho > 0.0)) throw ConfigError("rho must be positive");
    if (!(horizon_T > 0.0)) throw ConfigError("horizon_T must be positive");
    if (!(cap_R > 0.0)) throw ConfigError("cap_R must be positive");
    if (gamma < 0.0) throw ConfigError("gamma must be nonnegative");
    effectiveness_b.domain().validate();
    x0.domain().validate();
    if (!(effectiveness_b.domain() == x0.domain()))
        throw ConfigError("effectiveness_b and x0 live on different domains");
}

ControlSignal ControlSignal::zero() {
    return ControlSignal([](double, double, double) { return 0.0; }, "zero");
}

ControlSignal ControlSignal::constant(double level) {
    return ControlSignal([level](double, double, double) { return level; },
                         "constant");
}

ControlSignal ControlSignal::from_rule(Rule rule, std::string label) {
    if (!rule) throw ConfigError("control rule must be callable");
    return ControlSignal(std::move(rule), std::move(label));
}

ControlSignal ControlSignal::from_samples(std::vector<double> times,
                                          std::vector<SpectralField> values) {
    if (times.size() < 2 || times.size() != values.size())
        throw ConfigError("sampled control needs >= 2 matching time/value samples");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i] < times[i + 1]))
            throw ConfigError("sampled control times must be strictly increasing");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i].domain() == values[0].domain()))
            throw ConfigError("sampled control fields live on different domains");
    for (const auto& v : values)
        for (double c : v.coeffs())
            if (!std::isfinite(c)) throw ConfigError("sampled control has non-finite values");
    ControlSignal u(nullptr, "sampled");
    u.times_ = std::move(times);
    u.values_ = std::move(values);
    return u;
}

const std::vector<double>& ControlSignal::times() const {
    if (!is_sampled()) throw ConfigError("control is a rule, no sample grid");
    return times_;
}

const std::vector<SpectralField>& ControlSignal::values() const {
    if (!is_sampled()) throw ConfigError("control is a rule, no sample values");
    return values_;
}

double ControlSignal::eval(double t, double xi1, double xi2) const {
    if (!is_sampled()) return rule_(t, xi1, xi2);
    const std::size_t i = locate(times_, t);
    const double h = times_[i + 1] - times_[i];
    const double w = std::clamp((t - times_[i]) / h, 0.0, 1.0);
    SpectralField f = values_[i];
    f *= 1.0 - w;
    f += w * values_[i + 1];
    return reconstruct(f, {{xi1, xi2}})[0];
}

SpectralField ControlSignal::coeffs_at(double t, const SpectralTransform& transform) const {
    if (is_sampled()) {
        if (!(values_[0].domain() == transform.domain()))
            throw ConfigError("sampled control domain does not match the transform");
        const std::size_t i = locate(times_, t);
        const double h = times_[i + 1] - times_[i];
        const double w = std::clamp((t - times_[i]) / h, 0.0, 1.0);
        SpectralField f = values_[i];
        f *= 1.0 - w;
        f += w * values_[i + 1];
        return f;
    }
    return transform.project_function(
        [&](double x1, double x2) { return rule_(t, x1, x2); });
}

ControlSignal sample_control(const ControlSignal& u, const SpectralTransform& transform,
                             const std::vector<double>& times) {
    std::vector<SpectralField> values;
    values.reserve(times.size());
    for (double t : times) values.push_back(u.coeffs_at(t, transform));
    return ControlSignal::from_samples(times, std::move(values));
}

ControlSignal add_scaled(const ControlSignal& a, double s, const ControlSignal& b) {
    const auto& ta = a.times();
    const auto& tb = b.times();
    if (ta != tb) throw ConfigError("add_scaled: controls sampled on different grids");
    std::vector<SpectralField> values;
    values.reserve(ta.size());
    for (std::size_t i = 0; i < ta.size(); ++i)
        values.push_back(a.values()[i] + s * b.values()[i]);
    return ControlSignal::from_samples(ta, std::move(values));
}

double control_norm(const ControlSignal& u) {
    const auto& t = u.times();
    const auto& v = u.values();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double h = t[i + 1] - t[i];
        const auto& c0 = v[i].coeffs();
        const auto& c1 = v[i + 1].coeffs();
        double s = 0.0;
        for (std::size_t k = 0; k < c0.size(); ++k)
            s += c0[k] * c0[k] + c0[k] * c1[k] + c1[k] * c1[k];
        sum += h / 3.0 * s;
    }
    return std::sqrt(sum);
}

Trajectory mild_solve(const ModelParams& params, const ControlSignal& u,
                      const std::vector<double>& times) {
    params.validate();
    if (times.size() < 2 || std::abs(times.front()) > 1e-12 ||
        std::abs(times.back() - params.horizon_T) > 1e-9 * std::max(1.0, params.horizon_T))
        throw ConfigError("trajectory grid must span [0, T]");
    const DomainSpec& domain = params.x0.domain();
    if (u.is_sampled()) {
        if (!(u.values()[0].domain() == domain))
            throw ConfigError("control and state live on different domains");
        check_sampled_on_horizon(u, params.horizon_T);
    }

    const std::vector<double> grid =
        u.is_sampled() ? merge_grids(times, u.times()) : times;
    const int num_modes = domain.num_modes();

    // Constant b = c acts on coefficients as the scalar c: <b u, e_k> = c u^k,
    // so sampled controls skip the pointwise round trip entirely.
    const auto& b_coeffs = params.effectiveness_b.coeffs();
    bool const_b = true;
    for (std::size_t k = 1; k < b_coeffs.size(); ++k)
        if (b_coeffs[k] != 0.0) { const_b = false; break; }
    const double b_scale =
        const_b ? b_coeffs[0] / std::sqrt(domain.length_L * domain.height_H) : 1.0;

    SpectralTransform transform(domain);
    std::vector<double> b_values;
    if (!const_b) b_values = transform.reconstruct_values(params.effectiveness_b);

    // forcing[i][k] = <b * u(grid[i]), e_k>. Sampled controls interpolate
    // coefficients; rules are evaluated pointwise so the product with b is
    // projected in one pass (no intermediate truncation of the rule).
    std::vector<std::vector<double>> forcing(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (u.is_sampled() && const_b) {
            forcing[i] = std::move(u.coeffs_at(grid[i], transform).coeffs());
            if (b_scale != 1.0)
                for (double& c : forcing[i]) c *= b_scale;
            continue;
        }
        std::vector<double> pw;
        if (u.is_sampled()) {
            pw = transform.reconstruct_values(u.coeffs_at(grid[i], transform));
        } else {
            pw.resize(transform.num_points());
            for (int q = 0; q < transform.num_points(); ++q)
                pw[q] = u.eval(grid[i], transform.point_x1()[q], transform.point_x2()[q]);
        }
        if (!const_b)
            for (int q = 0; q < transform.num_points(); ++q) pw[q] *= b_values[q];
        forcing[i] = std::move(transform.project_values(pw).coeffs());
        if (b_scale != 1.0)
            for (double& c : forcing[i]) c *= b_scale;
    }

    const std::vector<double> mu = mode_decay_rates(params, domain);

    std::vector<double> state = params.x0.coeffs();
    Trajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    traj.states.emplace_back(domain, state);

    std::size_t next_out = 1;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double h = grid[i + 1] - grid[i];
        for (int k = 0; k < num_modes; ++k) {
            const auto [w0, w1] = linear_forcing_weights(mu[k], h);
            state[k] = std::exp(-mu[k] * h) * state[k] + w0 * forcing[i][k] +
                       w1 * forcing[i + 1][k];
        }
        if (next_out < times.size() && grid[i + 1] == times[next_out]) {
            traj.states.emplace_back(domain, state);
            ++next_out;
        }
    }
    if (traj.states.size() != times.size())
        throw Error("mild_solve: internal grid mismatch while emitting states");
    return traj;
}

SpectralField multiply_by_b(const ModelParams& params, const SpectralField& field) {
    if (!(field.domain() == params.effectiveness_b.domain()))
        throw ConfigError("multiply_by_b: field domain does not match b");
    SpectralTransform transform(field.domain());
    std::vector<double> fb = transform.reconstruct_values(params.effectiveness_b);
    std::vector<double> fy = transform.reconstruct_values(field);
    for (std::size_t q = 0; q < fb.size(); ++q) fy[q] *= fb[q];
    return transform.project_values(fy);
}

std::vector<double> average_goodwill(const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.states.size());
    for (const auto& s : traj.states) {
        const DomainSpec& d = s.domain();
        out.push_back(std::sqrt(d.length_L * d.height_H) * s.coeff(0, 0));
    }
    return out;
}

namespace {

double apply_rule(ObjectiveRule rule, double v) {
    switch (rule.kind) {
        case ObjectiveRule::Kind::zero: return 0.0;
        case ObjectiveRule::Kind::linear: return v;
        case ObjectiveRule::Kind::quadratic: return v * v;
        case ObjectiveRule::Kind::quadratic_half_capped: return 0.5 * v * v;
    }
    throw ConfigError("unsupported objective rule tag");
}

}  // namespace

double evaluate_objective_general(const ModelParams& params, const Trajectory& traj,
                                  const ControlSignal& u, ObjectiveRule phi0,
                                  ObjectiveRule h0) {
    (void)params;  // kept for signature symmetry with the solvers
    if (traj.states.empty()) throw ConfigError("trajectory is empty");
    const DomainSpec& domain = traj.states.front().domain();
    SpectralTransform transform(domain);

    double terminal = 0.0;
    if (phi0.kind != ObjectiveRule::Kind::zero) {
        if (phi0.kind == ObjectiveRule::Kind::quadratic_half_capped)
            throw ConfigError("terminal utility does not support the capped-cost tag");
        std::vector<double> xT = transform.reconstruct_values(traj.states.back());
        for (double& v : xT) v = apply_rule(phi0, v);
        terminal = transform.integrate(xT);
    }

    double cost = 0.0;
    if (h0.kind != ObjectiveRule::Kind::zero) {
        std::vector<double> per_time(traj.times.size());
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const double t = traj.times[i];
            std::vector<double> uv;
            if (u.is_sampled()) {
                uv = transform.reconstruct_values(u.coeffs_at(t, transform));
            } else {
                uv.resize(transform.num_points());
                for (int q = 0; q < transform.num_points(); ++q)
                    uv[q] = u.eval(t, transform.point_x1()[q], transform.point_x2()[q]);
            }
            for (double& v : uv) v = apply_rule(h0, v);
            per_time[i] = transform.integrate(uv);
        }
        cost = trapezoid(traj.times, per_time);
    }
    return terminal - cost;
}

}  // namespace goodwill
