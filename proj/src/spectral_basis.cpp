#include "goodwill/spectral_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "goodwill/errors.hpp"

namespace goodwill {

namespace {

constexpr double kPi = std::numbers::pi;

void check_mode(const DomainSpec& d, ModeIndex idx) {
    if (idx.m < 0 || idx.m > d.modes_M || idx.n < 0 || idx.n > d.modes_N)
        throw ConfigError("mode index (" + std::to_string(idx.m) + "," +
                          std::to_string(idx.n) + ") outside truncation " +
                          std::to_string(d.modes_M) + "x" + std::to_string(d.modes_N));
}

// Per-axis normalized cosine: nu_j cos(j pi s / len) with nu_0 = 1/sqrt(len),
// nu_{j>=1} = sqrt(2/len), so the family is orthonormal on [0, len].
double axis_cos(int j, double s, double len) {
    const double nu = j == 0 ? 1.0 / std::sqrt(len) : std::sqrt(2.0 / len);
    return nu * std::cos(j * kPi * s / len);
}

}  // namespace

void DomainSpec::validate() const {
    if (!(length_L > 0.0) || !(height_H > 0.0))
        throw ConfigError("domain extents must be positive");
    if (modes_M < 0 || modes_N < 0)
        throw ConfigError("mode truncations must be nonnegative");
    const int need = 2 * std::max(modes_M, modes_N) + 2;
    if (quad_points < need)
        throw ConfigError("quad_points=" + std::to_string(quad_points) +
                          " too small: need >= " + std::to_string(need) +
                          " to resolve the highest retained mode");
}

SpectralField::SpectralField(const DomainSpec& domain, std::vector<double> coeffs)
    : domain_(domain), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != domain_.num_modes())
        throw ConfigError("coefficient count does not match the domain truncation");
}

double SpectralField::norm_sq() const {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return s;
}

double SpectralField::norm() const { return std::sqrt(norm_sq()); }

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    if (!(domain_ == other.domain_))
        throw ConfigError("field domains differ in +=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    if (!(domain_ == other.domain_))
        throw ConfigError("field domains differ in -=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

SpectralField constant_field(const DomainSpec& domain, double c) {
    SpectralField f(domain);
    f.coeff(0, 0) = c * std::sqrt(domain.length_L * domain.height_H);
    return f;
}

double laplace_eigenvalue(const DomainSpec& domain, ModeIndex idx) {
    check_mode(domain, idx);
    const double rm = idx.m / domain.length_L;
    const double rn = idx.n / domain.height_H;
    return (rm * rm + rn * rn) * kPi * kPi;
}

double a_eigenvalue(const DomainSpec& domain, ModeIndex idx, double rho) {
    if (!(rho > 0.0)) throw ConfigError("a_eigenvalue: rho must be positive");
    return laplace_eigenvalue(domain, idx) + rho;
}

double eigenfunction_eval(const DomainSpec& domain, ModeIndex idx,
                          double xi1, double xi2) {
    check_mode(domain, idx);
    if (xi1 < 0.0 || xi1 > domain.length_L || xi2 < 0.0 || xi2 > domain.height_H)
        throw DomainError("point (" + std::to_string(xi1) + "," + std::to_string(xi2) +
                          ") outside [0," + std::to_string(domain.length_L) + "]x[0," +
                          std::to_string(domain.height_H) + "]");
    return axis_cos(idx.m, xi1, domain.length_L) *
           axis_cos(idx.n, xi2, domain.height_H);
}

SpectralTransform::SpectralTransform(const DomainSpec& domain) : domain_(domain) {
    domain.validate();
    const Quadrature1D qx = gauss_legendre(domain.quad_points, 0.0, domain.length_L);
    const Quadrature1D qy = gauss_legendre(domain.quad_points, 0.0, domain.height_H);
    const int nq = domain.quad_points;
    px1_.resize(nq * nq);
    px2_.resize(nq * nq);
    weights_.resize(nq * nq);
    for (int iy = 0; iy < nq; ++iy)
        for (int ix = 0; ix < nq; ++ix) {
            const int q = iy * nq + ix;
            px1_[q] = qx.nodes[ix];
            px2_[q] = qy.nodes[iy];
            weights_[q] = qx.weights[ix] * qy.weights[iy];
        }

    // Tensor structure: e_k(q) = cx[m][ix] * cy[n][iy]; tabulated flat.
    std::vector<std::vector<double>> cx(domain.modes_M + 1), cy(domain.modes_N + 1);
    for (int m = 0; m <= domain.modes_M; ++m) {
        cx[m].resize(nq);
        for (int ix = 0; ix < nq; ++ix)
            cx[m][ix] = axis_cos(m, qx.nodes[ix], domain.length_L);
    }
    for (int n = 0; n <= domain.modes_N; ++n) {
        cy[n].resize(nq);
        for (int iy = 0; iy < nq; ++iy)
            cy[n][iy] = axis_cos(n, qy.nodes[iy], domain.height_H);
    }
    basis_.resize(static_cast<std::size_t>(domain.num_modes()) * num_points());
    for (int m = 0; m <= domain.modes_M; ++m)
        for (int n = 0; n <= domain.modes_N; ++n) {
            const int k = domain.flat_index(m, n);
            double* row = basis_.data() + static_cast<std::size_t>(k) * num_points();
            for (int iy = 0; iy < nq; ++iy)
                for (int ix = 0; ix < nq; ++ix) row[iy * nq + ix] = cx[m][ix] * cy[n][iy];
        }
}

SpectralField SpectralTransform::project_values(const std::vector<double>& values) const {
    if (static_cast<int>(values.size()) != num_points())
        throw ConfigError("project_values: sample count does not match the quadrature grid");
    SpectralField field(domain_);
    const int np = num_points();
    for (int k = 0; k < domain_.num_modes(); ++k) {
        const double* row = basis_.data() + static_cast<std::size_t>(k) * np;
        double acc = 0.0;
        for (int q = 0; q < np; ++q) acc += weights_[q] * row[q] * values[q];
        field.coeffs()[k] = acc;
    }
    return field;
}

SpectralField SpectralTransform::project_function(
    const std::function<double(double, double)>& f) const {
    std::vector<double> values(num_points());
    for (int q = 0; q < num_points(); ++q) values[q] = f(px1_[q], px2_[q]);
    return project_values(values);
}

std::vector<double> SpectralTransform::reconstruct_values(const SpectralField& field) const {
    if (!(field.domain() == domain_))
        throw ConfigError("reconstruct_values: field domain does not match the transform");
    const int np = num_points();
    std::vector<double> values(np, 0.0);
    for (int k = 0; k < domain_.num_modes(); ++k) {
        const double c = field.coeffs()[k];
        if (c == 0.0) continue;
        const double* row = basis_.data() + static_cast<std::size_t>(k) * np;
        for (int q = 0; q < np; ++q) values[q] += c * row[q];
    }
    return values;
}

double SpectralTransform::integrate(const std::vector<double>& values) const {
    if (static_cast<int>(values.size()) != num_points())
        throw ConfigError("integrate: sample count does not match the quadrature grid");
    double acc = 0.0;
    for (int q = 0; q < num_points(); ++q) acc += weights_[q] * values[q];
    return acc;
}

SpectralField project(const DomainSpec& domain,
                      const std::function<double(double, double)>& f) {
    return SpectralTransform(domain).project_function(f);
}

std::vector<double> reconstruct(const SpectralField& field,
                                const std::vector<std::pair<double, double>>& points) {
    const DomainSpec& d = field.domain();
    std::vector<double> out(points.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [x1, x2] = points[i];
        if (x1 < 0.0 || x1 > d.length_L || x2 < 0.0 || x2 > d.height_H)
            throw DomainError("reconstruct: point outside the rectangle");
        double acc = 0.0;
        for (int m = 0; m <= d.modes_M; ++m)
            for (int n = 0; n <= d.modes_N; ++n)
                acc += field.coeff(m, n) * eigenfunction_eval(d, {m, n}, x1, x2);
        out[i] = acc;
    }
    return out;
}

}  // namespace goodwill
