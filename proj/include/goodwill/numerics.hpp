#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace goodwill {

// phi1(z) = (1 - e^{-z}) / z, continuous at 0 with phi1(0) = 1.
double phi1(double z);

// phi2(z) = (z - 1 + e^{-z}) / z^2, continuous at 0 with phi2(0) = 1/2.
// Both are evaluated by series for small |z| to dodge cancellation.
double phi2(double z);

// Weights of the exact one-step convolution
//   integral_0^h e^{-mu (h - s)} g(s) ds  =  w0 * g(0) + w1 * g(h)
// for g linear on [0, h]. Requires mu >= 0 and h > 0.
struct ConvolutionWeights {
    double w0;
    double w1;
};
ConvolutionWeights linear_forcing_weights(double mu, double h);

// Gauss-Legendre nodes and weights on [a, b], n points.
struct Quadrature1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature1D gauss_legendre(int n, double a, double b);

// Composite Simpson on [a, b] with n subintervals (n rounded up to even).
double integrate_simpson(const std::function<double(double)>& f,
                         double a, double b, int n);

// Trapezoid rule for samples on an arbitrary increasing grid.
double trapezoid(const std::vector<double>& t, const std::vector<double>& v);

// Integral of the piecewise-linear interpolant squared on grid t:
//   sum over intervals of h/3 * (v0^2 + v0 v1 + v1^2).
// This is the exact L^2 norm of the interpolant, not a quadrature rule.
double piecewise_linear_l2sq(const std::vector<double>& t,
                             const std::vector<double>& v);

// Uniform time grid 0 = t_0 < ... < t_steps = horizon.
std::vector<double> uniform_grid(double horizon, int steps);

// Deterministic uniform draws on [lo, hi) built on mt19937_64. The engine's
// output sequence is fixed by the standard; the bits-to-double mapping is
// pinned here (not left to a distribution) so seeds reproduce everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo = 0.0, double hi = 1.0);
    int uniform_int(int lo, int hi);  // inclusive range

private:
    std::mt19937_64 engine_;
};

// Fixed-format float rendering: shortest %.17g-style text that round-trips.
// Used by every exporter so identical inputs give byte-identical files.
std::string format_double(double v);

}  // namespace goodwill
