#pragma once

// =============================================================================
// Independent numerical oracles: a Crank-Nicolson finite-difference solver for
// the goodwill PDE, an exact discrete-time dynamic-programming solver for the
// per-mode scalar LQ problems, and a randomized Gateaux-derivative probe.
// These deliberately avoid the spectral solution path so they can arbitrate it.
// =============================================================================

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "goodwill/dynamics.hpp"

namespace goodwill {

// Cell-centered raster of a scalar field on [0,L] x [0,H]. Cell (ix, iy)
// holds the value at ((ix+1/2) L/nx, (iy+1/2) H/ny); storage is row-major,
// values[iy*nx + ix].
struct GridField {
    int nx = 0;
    int ny = 0;
    double length_L = 0.0;
    double height_H = 0.0;
    std::vector<double> values;

    void validate() const;
    double cell_x1(int ix) const { return (ix + 0.5) * length_L / nx; }
    double cell_x2(int iy) const { return (iy + 0.5) * height_H / ny; }
    double l2_norm() const;  // continuum L2 norm (sqrt of cell-sum * area/ncells)
};

// Sample a spectral field at the cell centers of an nx-by-ny raster.
GridField rasterize(const SpectralField& field, int nx, int ny);

struct FdSolution {
    std::vector<double> times;
    std::vector<GridField> fields;
};

// Crank-Nicolson integration of dx/dt = (Laplacian - rho) x + b u with
// homogeneous Neumann walls (mirrored ghost cells, second order in space and
// time). The step count is rounded so the grid lands exactly on the horizon.
FdSolution fd_solve(const ModelParams& params, const ControlSignal& u,
                    int nx, int ny, double dt);

// -----------------------------------------------------------------------------
// Scalar discrete-time LQ oracle.
//
// Dynamics  x_{j+1} = (1 + a dt) x_j + dt u_j + dt f,   dt = T / steps,
// cost      sum_j dt u_j^2 + terminal_weight (x_steps - target)^2.
// The backward recursion is exact for the discrete problem; its value
// converges at first order in dt to the continuous per-mode value, so
// Richardson extrapolation (2 v(2S) - v(S)) gains an order.
// -----------------------------------------------------------------------------
struct ScalarLQInstance {
    double a = 0.0;                // drift (per-mode: -mu_k)
    double terminal_weight = 0.0;  // +gamma (tracking) or -gamma (profit)
    double target = 0.0;
    double f = 0.0;                // affine forcing
    double x0 = 1.0;               // initial state for the forward pass
    double T = 1.0;
    int steps = 100;

    void validate() const;
};

struct ScalarDPResult {
    double value = 0.0;              // V_0(x0) from the recursion
    std::vector<double> P, q, c;     // V_j(x) = P_j x^2 + 2 q_j x + c_j
    std::vector<double> gain_K, gain_d;  // u_j = K_j x_j + d_j
    std::vector<double> xs, us;      // forward pass (xs has steps+1 entries)
    bool blown_up = false;           // discrete Riccati left the solvable set
    int blowup_step = -1;            // first j (from the end) where it failed
    double blowup_time = 0.0;
};

ScalarDPResult scalar_lq_dp(const ScalarLQInstance& inst);

// Richardson-extrapolated DP value: 2 v(2*steps) - v(steps).
double scalar_lq_dp_extrapolated(const ScalarLQInstance& inst);

// CSV convergence table "steps,value" over `levels` doublings of inst.steps.
std::string dp_convergence_csv(const ScalarLQInstance& inst, int levels);

// -----------------------------------------------------------------------------
// First-order optimality probe: max over `directions` random unit spectral
// directions v (piecewise linear on u's sample grid) of the central difference
// |(J(u+eps v) - J(u-eps v)) / (2 eps)| with eps = 1e-4 (1 + ||u||).
// Deterministic for a fixed seed. Requires a sampled control.
// -----------------------------------------------------------------------------
double gateaux_gradient_norm(const std::function<double(const ControlSignal&)>& J,
                             const ControlSignal& u, int directions,
                             std::uint64_t seed = 20240601u);

}  // namespace goodwill
