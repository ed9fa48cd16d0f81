#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "goodwill/numerics.hpp"

namespace goodwill {

// Rectangle [0,L] x [0,H] with a spectral truncation. modes_M / modes_N are
// the highest retained cosine frequencies per axis, so the basis holds
// (modes_M+1)*(modes_N+1) functions including the constant mode (0,0).
struct DomainSpec {
    double length_L = 1.0;
    double height_H = 1.0;
    int modes_M = 8;
    int modes_N = 8;
    int quad_points = 64;  // per axis; must resolve products of retained modes

    int num_modes() const { return (modes_M + 1) * (modes_N + 1); }
    int flat_index(int m, int n) const { return m * (modes_N + 1) + n; }

    // Throws ConfigError when any invariant fails.
    void validate() const;

    bool operator==(const DomainSpec&) const = default;
};

struct ModeIndex {
    int m = 0;
    int n = 0;
    bool operator==(const ModeIndex&) const = default;
};

// A field on the rectangle as coefficients over the Neumann cosine basis,
// flat storage in row-major mode order: k = m*(modes_N+1) + n.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(const DomainSpec& domain)
        : domain_(domain), coeffs_(domain.num_modes(), 0.0) {}
    SpectralField(const DomainSpec& domain, std::vector<double> coeffs);

    const DomainSpec& domain() const { return domain_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::vector<double>& coeffs() { return coeffs_; }
    double coeff(int m, int n) const { return coeffs_[domain_.flat_index(m, n)]; }
    double& coeff(int m, int n) { return coeffs_[domain_.flat_index(m, n)]; }

    double norm_sq() const;       // Parseval: sum of squared coefficients
    double norm() const;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);

private:
    DomainSpec domain_;
    std::vector<double> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Constant field c: coefficient c*sqrt(L*H) at (0,0), zero elsewhere.
SpectralField constant_field(const DomainSpec& domain, double c);

double laplace_eigenvalue(const DomainSpec& domain, ModeIndex idx);

// mu_k = lambda_{m,n} + rho, the decay rate of mode k under the dynamics.
double a_eigenvalue(const DomainSpec& domain, ModeIndex idx, double rho);

double eigenfunction_eval(const DomainSpec& domain, ModeIndex idx,
                          double xi1, double xi2);

// Forward transform: coeffs[k] ~ integral of f * e_k over the rectangle,
// tensor Gauss-Legendre with domain.quad_points nodes per axis.
SpectralField project(const DomainSpec& domain,
                      const std::function<double(double, double)>& f);

// Pointwise synthesis sum_k coeffs[k] e_k(xi) at the given points.
std::vector<double> reconstruct(const SpectralField& field,
                                const std::vector<std::pair<double, double>>& points);

// Cached quadrature grid plus eigenfunction table for one DomainSpec.
// project/reconstruct above are one-shot conveniences; hot loops build a
// transform once and reuse it.
class SpectralTransform {
public:
    explicit SpectralTransform(const DomainSpec& domain);

    const DomainSpec& domain() const { return domain_; }
    int num_points() const { return static_cast<int>(weights_.size()); }
    const std::vector<double>& point_x1() const { return px1_; }
    const std::vector<double>& point_x2() const { return px2_; }
    const std::vector<double>& weights() const { return weights_; }

    // f sampled at the quadrature points, in the order of point_x1/point_x2.
    SpectralField project_values(const std::vector<double>& values) const;
    SpectralField project_function(const std::function<double(double, double)>& f) const;

    // Field synthesized at the quadrature points.
    std::vector<double> reconstruct_values(const SpectralField& field) const;

    // Quadrature of pointwise samples: sum w_q * values[q].
    double integrate(const std::vector<double>& values) const;

private:
    DomainSpec domain_;
    std::vector<double> px1_, px2_, weights_;
    std::vector<double> basis_;  // [k * num_points + q] = e_k(point q)
};

}  // namespace goodwill
