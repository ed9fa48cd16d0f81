#include "goodwill/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "goodwill/errors.hpp"
#include "goodwill/numerics.hpp"

namespace goodwill {

void GridField::validate() const {
    if (nx <= 0 || ny <= 0) throw ConfigError("grid dimensions must be positive");
    if (!(length_L > 0.0) || !(height_H > 0.0))
        throw ConfigError("grid extents must be positive");
    if (static_cast<int>(values.size()) != nx * ny)
        throw ConfigError("grid holds " + std::to_string(values.size()) +
                          " values, expected " + std::to_string(nx * ny));
    for (double v : values)
        if (!std::isfinite(v)) throw ConfigError("grid contains a non-finite value");
}

double GridField::l2_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s * (length_L / nx) * (height_H / ny));
}

GridField rasterize(const SpectralField& field, int nx, int ny) {
    if (nx <= 0 || ny <= 0) throw ConfigError("grid dimensions must be positive");
    const DomainSpec& d = field.domain();
    GridField g;
    g.nx = nx;
    g.ny = ny;
    g.length_L = d.length_L;
    g.height_H = d.height_H;
    g.values.resize(static_cast<size_t>(nx) * ny);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(g.values.size());
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) pts.emplace_back(g.cell_x1(ix), g.cell_x2(iy));
    g.values = reconstruct(field, pts);
    return g;
}

namespace {

// Linear-in-time coefficients of a sampled control, evaluated at t.
void sampled_coeffs_at(const ControlSignal& u, double t, std::vector<double>& out) {
    const std::vector<double>& ts = u.times();
    const std::vector<SpectralField>& vs = u.values();
    if (t <= ts.front()) {
        out.assign(vs.front().coeffs().begin(), vs.front().coeffs().end());
        return;
    }
    if (t >= ts.back()) {
        out.assign(vs.back().coeffs().begin(), vs.back().coeffs().end());
        return;
    }
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const size_t i = static_cast<size_t>(it - ts.begin()) - 1;
    const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
    const std::vector<double>& lo = vs[i].coeffs();
    const std::vector<double>& hi = vs[i + 1].coeffs();
    out.resize(lo.size());
    for (size_t k = 0; k < lo.size(); ++k) out[k] = (1.0 - w) * lo[k] + w * hi[k];
}

}  // namespace

FdSolution fd_solve(const ModelParams& params, const ControlSignal& u,
                    int nx, int ny, double dt) {
    params.validate();
    if (nx <= 0 || ny <= 0) throw ConfigError("grid dimensions must be positive");
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    const DomainSpec& domain = params.x0.domain();
    const double L = domain.length_L, H = domain.height_H, T = params.horizon_T;
    const int steps = std::max(1, static_cast<int>(std::llround(T / dt)));
    const double h = T / steps;  // snap so the grid lands on T
    const int n = nx * ny;
    const double hx = L / nx, hy = H / ny;
    const double cx = 1.0 / (hx * hx), cy = 1.0 / (hy * hy);

    // D = Laplacian - rho I on the cell-centered grid, mirrored ghost cells.
    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    trips.reserve(static_cast<size_t>(5) * n);
    const bool diffuse = params.diffusion;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const int id = iy * nx + ix;
            double diag = -params.rho;
            if (diffuse) {
                if (ix > 0) { trips.emplace_back(id, id - 1, cx); diag -= cx; }
                if (ix < nx - 1) { trips.emplace_back(id, id + 1, cx); diag -= cx; }
                if (iy > 0) { trips.emplace_back(id, id - nx, cy); diag -= cy; }
                if (iy < ny - 1) { trips.emplace_back(id, id + nx, cy); diag -= cy; }
            }
            trips.emplace_back(id, id, diag);
        }
    }
    Eigen::SparseMatrix<double> D(n, n);
    D.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseMatrix<double> I(n, n);
    I.setIdentity();
    Eigen::SparseMatrix<double> lhs = I - (h / 2.0) * D;
    Eigen::SparseMatrix<double> rhs_op = I + (h / 2.0) * D;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(lhs);
    if (lu.info() != Eigen::Success)
        throw Error("finite-difference operator factorization failed");

    // Cell-center geometry, effectiveness samples, and (for sampled controls)
    // the mode basis table so per-step forcing needs no trig.
    std::vector<std::pair<double, double>> cells;
    cells.reserve(n);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            cells.emplace_back((ix + 0.5) * hx, (iy + 0.5) * hy);
    const std::vector<double> b_cells = reconstruct(params.effectiveness_b, cells);
    const int num_modes = domain.num_modes();
    std::vector<double> basis;  // [k*n + cell]
    if (u.is_sampled()) {
        basis.resize(static_cast<size_t>(num_modes) * n);
        for (int m = 0; m <= domain.modes_M; ++m)
            for (int nn = 0; nn <= domain.modes_N; ++nn) {
                const int k = domain.flat_index(m, nn);
                for (int cidx = 0; cidx < n; ++cidx)
                    basis[static_cast<size_t>(k) * n + cidx] = eigenfunction_eval(
                        domain, ModeIndex{m, nn}, cells[cidx].first, cells[cidx].second);
            }
    }
    std::vector<double> coeff_buf;
    auto forcing_at = [&](double t, Eigen::VectorXd& s) {
        if (u.is_sampled()) {
            sampled_coeffs_at(u, t, coeff_buf);
            s.setZero();
            for (int k = 0; k < num_modes; ++k) {
                const double ck = coeff_buf[k];
                if (ck == 0.0) continue;
                const double* row = basis.data() + static_cast<size_t>(k) * n;
                for (int cidx = 0; cidx < n; ++cidx) s[cidx] += ck * row[cidx];
            }
        } else {
            for (int cidx = 0; cidx < n; ++cidx)
                s[cidx] = u.eval(t, cells[cidx].first, cells[cidx].second);
        }
        for (int cidx = 0; cidx < n; ++cidx) s[cidx] *= b_cells[cidx];
    };

    GridField init = rasterize(params.x0, nx, ny);
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(init.values.data(), n);

    FdSolution out;
    out.times.reserve(steps + 1);
    out.fields.reserve(steps + 1);
    auto emit = [&](double t, const Eigen::VectorXd& v) {
        GridField g;
        g.nx = nx;
        g.ny = ny;
        g.length_L = L;
        g.height_H = H;
        g.values.assign(v.data(), v.data() + n);
        out.times.push_back(t);
        out.fields.push_back(std::move(g));
    };
    emit(0.0, x);

    Eigen::VectorXd s_now(n), s_next(n), rhs(n);
    forcing_at(0.0, s_now);
    for (int j = 0; j < steps; ++j) {
        const double t_next = (j + 1) * h;
        forcing_at(t_next, s_next);
        rhs = rhs_op * x + (h / 2.0) * (s_now + s_next);
        x = lu.solve(rhs);
        emit(t_next, x);
        s_now.swap(s_next);
    }
    return out;
}

void ScalarLQInstance::validate() const {
    if (steps < 100) throw ConfigError("scalar LQ oracle needs at least 100 steps");
    if (!(T > 0.0)) throw ConfigError("horizon must be positive");
    if (!std::isfinite(a) || !std::isfinite(terminal_weight) ||
        !std::isfinite(target) || !std::isfinite(f) || !std::isfinite(x0))
        throw ConfigError("scalar LQ instance has a non-finite field");
}

ScalarDPResult scalar_lq_dp(const ScalarLQInstance& inst) {
    inst.validate();
    const int S = inst.steps;
    const double dt = inst.T / S;
    const double alpha = 1.0 + inst.a * dt;

    ScalarDPResult res;
    res.P.assign(S + 1, 0.0);
    res.q.assign(S + 1, 0.0);
    res.c.assign(S + 1, 0.0);
    res.gain_K.assign(S, 0.0);
    res.gain_d.assign(S, 0.0);
    res.P[S] = inst.terminal_weight;
    res.q[S] = -inst.terminal_weight * inst.target;
    res.c[S] = inst.terminal_weight * inst.target * inst.target;

    for (int j = S - 1; j >= 0; --j) {
        const double Pn = res.P[j + 1], qn = res.q[j + 1], cn = res.c[j + 1];
        const double denom = 1.0 + Pn * dt;
        if (denom <= 0.0) {
            // The one-step minimization is unbounded below: discrete blow-up.
            res.blown_up = true;
            res.blowup_step = j;
            res.blowup_time = j * dt;
            return res;
        }
        const double beta = 1.0 / denom;
        res.P[j] = beta * Pn * alpha * alpha;
        res.q[j] = alpha * beta * (Pn * dt * inst.f + qn);
        res.c[j] = cn - dt * beta * qn * qn + beta * Pn * dt * dt * inst.f * inst.f +
                   2.0 * beta * qn * dt * inst.f;
        res.gain_K[j] = -beta * alpha * Pn;
        res.gain_d[j] = -beta * (Pn * dt * inst.f + qn);
    }

    res.xs.assign(S + 1, 0.0);
    res.us.assign(S, 0.0);
    res.xs[0] = inst.x0;
    for (int j = 0; j < S; ++j) {
        res.us[j] = res.gain_K[j] * res.xs[j] + res.gain_d[j];
        res.xs[j + 1] = alpha * res.xs[j] + dt * res.us[j] + dt * inst.f;
    }
    res.value = res.P[0] * inst.x0 * inst.x0 + 2.0 * res.q[0] * inst.x0 + res.c[0];
    return res;
}

double scalar_lq_dp_extrapolated(const ScalarLQInstance& inst) {
    ScalarLQInstance fine = inst;
    fine.steps = inst.steps * 2;
    const ScalarDPResult coarse_res = scalar_lq_dp(inst);
    const ScalarDPResult fine_res = scalar_lq_dp(fine);
    if (coarse_res.blown_up || fine_res.blown_up)
        throw BlowUpError("discrete LQ oracle blew up during extrapolation",
                          coarse_res.blown_up ? coarse_res.blowup_time
                                              : fine_res.blowup_time);
    return 2.0 * fine_res.value - coarse_res.value;
}

std::string dp_convergence_csv(const ScalarLQInstance& inst, int levels) {
    if (levels < 1) throw ConfigError("convergence table needs at least one level");
    std::string csv = "steps,value\n";
    ScalarLQInstance cur = inst;
    for (int lvl = 0; lvl < levels; ++lvl) {
        const ScalarDPResult r = scalar_lq_dp(cur);
        csv += std::to_string(cur.steps);
        csv += ',';
        csv += r.blown_up ? "blowup" : format_double(r.value);
        csv += '\n';
        if (cur.steps > (1 << 28)) break;
        cur.steps *= 2;
    }
    return csv;
}

double gateaux_gradient_norm(const std::function<double(const ControlSignal&)>& J,
                             const ControlSignal& u, int directions,
                             std::uint64_t seed) {
    if (!u.is_sampled())
        throw ConfigError("derivative probe needs a sampled control");
    if (directions <= 0) throw ConfigError("direction count must be positive");
    const std::vector<double>& ts = u.times();
    const DomainSpec& domain = u.values().front().domain();
    const int num_modes = domain.num_modes();
    const double eps = 1e-4 * (1.0 + control_norm(u));

    Rng rng(seed);
    double worst = 0.0;
    for (int d = 0; d < directions; ++d) {
        std::vector<SpectralField> dir;
        dir.reserve(ts.size());
        for (size_t i = 0; i < ts.size(); ++i) {
            SpectralField g(domain);
            for (int k = 0; k < num_modes; ++k)
                g.coeffs()[k] = rng.uniform(-1.0, 1.0);
            dir.push_back(std::move(g));
        }
        ControlSignal v = ControlSignal::from_samples(ts, std::move(dir));
        const double nv = control_norm(v);
        if (nv == 0.0) continue;
        ControlSignal plus = add_scaled(u, eps / nv, v);
        ControlSignal minus = add_scaled(u, -eps / nv, v);
        const double diff = std::abs((J(plus) - J(minus)) / (2.0 * eps));
        worst = std::max(worst, diff);
    }
    return worst;
}

}  // namespace goodwill
