#include "goodwill/numerics.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "goodwill/errors.hpp"

namespace goodwill {

double phi1(double z) {
    if (std::abs(z) < 0.5) {
        // sum_{j>=0} (-z)^j / (j+1)!
        double term = 1.0, sum = 1.0;
        for (int j = 1; j < 24; ++j) {
            term *= -z / (j + 1);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return -std::expm1(-z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 0.5) {
        // sum_{j>=0} (-z)^j / (j+2)!
        double term = 0.5, sum = 0.5;
        for (int j = 1; j < 24; ++j) {
            term *= -z / (j + 2);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return (z + std::expm1(-z)) / (z * z);
}

ConvolutionWeights linear_forcing_weights(double mu, double h) {
    if (!(h > 0.0) || mu < 0.0)
        throw ConfigError("linear_forcing_weights: need h > 0 and mu >= 0");
    const double z = mu * h;
    const double p2 = phi2(z);
    return {h * (phi1(z) - p2), h * p2};
}

namespace {

// Legendre P_n and P_n' at x by the three-term recurrence.
void legendre_pair(int n, double x, double& p, double& dp) {
    double pm1 = 1.0, pm0 = x;
    if (n == 0) { p = 1.0; dp = 0.0; return; }
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * pm0 - (k - 1.0) * pm1) / k;
        pm1 = pm0;
        pm0 = pk;
    }
    p = pm0;
    dp = n * (x * pm0 - pm1) / (x * x - 1.0);
}

}  // namespace

Quadrature1D gauss_legendre(int n, double a, double b) {
    if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
    gsl_integration_glfixed_table* table =
        gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
    if (!table) throw Error("gauss_legendre: table allocation failed");
    Quadrature1D q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double xi = 0.0, wi = 0.0;
        gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &xi,
                                      &wi, table);
        // GSL only ships full-precision tables for select sizes; polish the
        // root with Newton on P_n and recompute the weight so every n gets
        // machine-accurate rules.
        if (n > 1 && std::abs(xi) < 1.0) {
            for (int it = 0; it < 3; ++it) {
                double p, dp;
                legendre_pair(n, xi, p, dp);
                if (dp == 0.0) break;
                const double step = p / dp;
                xi -= step;
                if (std::abs(step) < 1e-15) break;
            }
            double p, dp;
            legendre_pair(n, xi, p, dp);
            wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
        }
        q.nodes[i] = a + 0.5 * (b - a) * (xi + 1.0);
        q.weights[i] = 0.5 * (b - a) * wi;
    }
    gsl_integration_glfixed_table_free(table);
    return q;
}

double integrate_simpson(const std::function<double(double)>& f,
                         double a, double b, int n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
    if (t.size() != v.size() || t.size() < 2)
        throw ConfigError("trapezoid: grids must match and hold >= 2 samples");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        sum += 0.5 * (t[i + 1] - t[i]) * (v[i] + v[i + 1]);
    return sum;
}

double piecewise_linear_l2sq(const std::vector<double>& t,
                             const std::vector<double>& v) {
    if (t.size() != v.size() || t.size() < 2)
        throw ConfigError("piecewise_linear_l2sq: grids must match and hold >= 2 samples");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double h = t[i + 1] - t[i];
        sum += h / 3.0 * (v[i] * v[i] + v[i] * v[i + 1] + v[i + 1] * v[i + 1]);
    }
    return sum;
}

std::vector<double> uniform_grid(double horizon, int steps) {
    if (!(horizon > 0.0) || steps < 1)
        throw ConfigError("uniform_grid: need horizon > 0 and steps >= 1");
    std::vector<double> t(steps + 1);
    for (int i = 0; i <= steps; ++i) t[i] = horizon * i / steps;
    t.back() = horizon;  // exact endpoint regardless of rounding
    return t;
}

double Rng::uniform(double lo, double hi) {
    // 53 high bits -> [0, 1); affine map after, so lo/hi stay exact.
    const double u = (engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

int Rng::uniform_int(int lo, int hi) {
    if (hi < lo) throw ConfigError("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
}

std::string format_double(double v) {
    char buf[40];
    // Shortest representation that round-trips: try increasing precision.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v || (std::isnan(back) && std::isnan(v))) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace goodwill
