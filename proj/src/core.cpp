#include "ratsys/core.hpp"

#include <cmath>
#include <sstream>

namespace ratsys {

Params validate_params(double alpha1, double beta1, double alpha2, double beta2) {
    if (!std::isfinite(alpha1) || !std::isfinite(beta1) || !std::isfinite(alpha2) ||
        !std::isfinite(beta2)) {
        throw std::invalid_argument("parameters must be finite");
    }
    // Exact comparison on the given representations: the excluded set is the
    // algebraic surface alpha1*beta2 = alpha2*beta1 itself, not a fattened
    // neighborhood of it.
    if (alpha1 * beta2 == alpha2 * beta1) {
        std::ostringstream msg;
        msg << "degenerate parameters: alpha1*beta2 = alpha2*beta1 (" << alpha1 * beta2
            << "); the system reduces to a scalar Riccati equation";
        if (alpha2 == 0.0 && beta2 == 0.0) {
            msg << " (alpha2 = beta2 = 0: no complete solution exists)";
        }
        throw degenerate_riccati_error(msg.str());
    }
    return Params{alpha1, beta1, alpha2, beta2};
}

Point step(const Params& p, Point z, double tol) {
    const double scale = std::max(1.0, std::abs(p.alpha2) + std::abs(p.beta2 * z.x));
    if (std::abs(z.y) <= tol * scale) {
        std::ostringstream msg;
        msg << "division by zero: |y| = " << std::abs(z.y) << " <= " << tol * scale;
        throw division_by_zero_error(msg.str());
    }
    return Point{(p.alpha1 + p.beta1 * z.x) / z.y, (p.alpha2 + p.beta2 * z.x) / z.y};
}

Orbit iterate(const Params& p, Point z0, std::size_t n, double tol) {
    Orbit o;
    o.start = z0;
    o.points.reserve(n + 1);
    o.points.push_back(z0);
    for (std::size_t k = 1; k <= n; ++k) {
        try {
            o.points.push_back(step(p, o.points.back(), tol));
        } catch (const division_by_zero_error&) {
            o.status = Orbit::Status::HitForbidden;
            o.stop_index = k;  // computing iterate k divided by ~0
            return o;
        }
    }
    o.status = Orbit::Status::Complete;
    o.stop_index = n;
    return o;
}

Mat3 Mat3::identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
    return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
            r.m[i][j] = s;
        }
    }
    return r;
}

std::array<double, 3> Mat3::operator*(const std::array<double, 3>& v) const {
    std::array<double, 3> r{};
    for (int i = 0; i < 3; ++i) {
        r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    }
    return r;
}

double Mat3::det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

CompanionMatrix companion_matrix(const Params& p) {
    Mat3 a;
    a.m = {{{p.beta1, 0.0, p.alpha1}, {p.beta2, 0.0, p.alpha2}, {0.0, 1.0, 0.0}}};
    return a;
}

}  // namespace ratsys
