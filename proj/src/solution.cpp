#include "ratsys/solution.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ratsys {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// partial-pivot Gaussian elimination for the 3x3 systems of this module
std::array<double, 3> solve3(std::array<std::array<double, 4>, 3> m) {
    double scale = 0.0;
    for (const auto& row : m) {
        for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(row[j]));
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        if (std::abs(m[piv][col]) <= 1e-14 * std::max(1.0, scale)) {
            throw singular_system_error("coefficient system is numerically singular");
        }
        std::swap(m[col], m[piv]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int j = col; j < 4; ++j) m[r][j] -= f * m[col][j];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = m[r][3];
        for (int j = r + 1; j < 3; ++j) s -= m[r][j] * x[j];
        x[r] = s / m[r][r];
    }
    return x;
}

// keeps the rolling v-window inside a safe magnitude range by exact
// power-of-two rescaling (ratios are all that matter downstream)
void renormalize(double& w0, double& w1, double& w2) {
    const double mag = std::max({std::abs(w0), std::abs(w1), std::abs(w2)});
    if (mag == 0.0 || (mag < 0x1p512 && mag > 0x1p-512)) return;
    int e = 0;
    std::frexp(mag, &e);
    w0 = std::ldexp(w0, -e);
    w1 = std::ldexp(w1, -e);
    w2 = std::ldexp(w2, -e);
}

}  // namespace

double v_step(const Params& p, double v0, double v1, double v2) {
    const long double d =
        static_cast<long double>(p.beta1) * p.alpha2 - static_cast<long double>(p.beta2) * p.alpha1;
    const long double next = static_cast<long double>(p.beta1) * v2 +
                             static_cast<long double>(p.alpha2) * v1 - d * v0;
    return static_cast<double>(next);
}

VSequence v_sequence(const Params& p, Point z0, std::size_t n) {
    VSequence vs;
    vs.params = p;
    vs.values.reserve(n + 2);
    vs.values.push_back(1.0);
    if (n + 2 >= 2) vs.values.push_back(z0.y);
    if (n + 2 >= 3) vs.values.push_back(p.beta2 * z0.x + p.alpha2);
    while (vs.values.size() < n + 2) {
        const std::size_t k = vs.values.size();
        vs.values.push_back(v_step(p, vs.values[k - 3], vs.values[k - 2], vs.values[k - 1]));
    }
    return vs;
}

Point solve_beta2_nonzero(const Params& p, Point z0, std::size_t n, double forbidden_tol) {
    // window (v(k-1), v(k), v(k+1)), advanced from k = 0 to k = n
    double w0 = 1.0;
    double w1 = z0.y;
    double w2 = p.beta2 * z0.x + p.alpha2;
    for (std::size_t k = 0; k < n; ++k) {
        const double next = v_step(p, w0, w1, w2);
        w0 = w1;
        w1 = w2;
        w2 = next;
        renormalize(w0, w1, w2);
    }
    const double mag = std::max({std::abs(w0), std::abs(w1), std::abs(w2)});
    if (mag == 0.0 || std::abs(w0) <= forbidden_tol * mag) {
        std::ostringstream msg;
        msg << "v(" << static_cast<long>(n) - 1
            << ") vanishes: the initial condition lies on the forbidden set";
        throw forbidden_orbit_error(msg.str());
    }
    return Point{(w2 / w0) / p.beta2 - p.alpha2 / p.beta2, w1 / w0};
}

Point solve_beta2_zero(const Params& p, Point z0, std::size_t n) {
    if (z0.y == 0.0) {
        throw division_by_zero_error("y0 = 0 is the forbidden set for beta2 = 0");
    }
    if (n == 0) return z0;

    const bool even = (n % 2 == 0);
    const double y = even ? z0.y : p.alpha2 / z0.y;
    if (n == 1) return Point{(p.alpha1 + p.beta1 * z0.x) / z0.y, y};

    const double b1sq = p.beta1 * p.beta1;
    double x = 0.0;
    if (p.alpha2 == b1sq) {
        // degenerate ratio beta1^2/alpha2 = 1: arithmetic drift in n
        const double drift = p.alpha1 * (p.beta1 + z0.y) / (2.0 * b1sq);
        if (even) {
            x = z0.x - drift * static_cast<double>(n);
        } else {
            x = (p.alpha1 + p.beta1 * z0.x) / z0.y -
                p.alpha1 * (p.beta1 + z0.y) * static_cast<double>(n - 1) /
                    (2.0 * p.beta1 * z0.y);
        }
    } else {
        const double ratio = b1sq / p.alpha2;
        const double s = p.alpha1 * (p.beta1 + z0.y) / (b1sq - p.alpha2);
        const double m = static_cast<double>(even ? n / 2 : (n - 1) / 2);
        const double grown = std::pow(ratio, m) * (z0.x + s) - s;
        x = even ? grown : (p.alpha1 + p.beta1 * grown) / z0.y;
    }
    return Point{x, y};
}

ComplexConstants complex_constants(const Params& p, const Spectrum& s, Point z0) {
    if (!s.complex_pair) {
        throw std::invalid_argument("complex_constants requires a complex-pair spectrum");
    }
    ComplexConstants cc;
    cc.lambda = s.real_roots.front().value;
    cc.rho = s.complex_pair->rho;
    cc.theta = s.complex_pair->theta;

    const double ct = std::cos(cc.theta);
    const double st = std::sin(cc.theta);
    const double b1 = p.alpha2 + p.beta2 * z0.x;

    // real form of the Vandermonde system in (C1, Re C2, Im C2) where
    // C1 = k*P and C2 = k*e^{ia}
    const auto sol = solve3({{{cc.lambda, 2.0 * cc.rho * ct, -2.0 * cc.rho * st, b1},
                              {1.0, 2.0, 0.0, z0.y},
                              {1.0 / cc.lambda, 2.0 * ct / cc.rho, 2.0 * st / cc.rho, 1.0}}});
    cc.c1 = sol[0];
    cc.c2_re = sol[1];
    cc.c2_im = sol[2];

    const double amp = std::hypot(cc.c2_re, cc.c2_im);
    if (amp <= 1e-12 * std::max(1.0, std::abs(cc.c1))) {
        // eigendirection: z0 is the fixed point, the cosine term is absent
        cc.k = 0.0;
        cc.a = 0.0;
        cc.P = 1.0;
        return cc;
    }
    cc.k = amp;
    cc.a = std::atan2(cc.c2_im, cc.c2_re);
    if (cc.a < 0.0) cc.a += kTwoPi;
    cc.P = cc.c1 / amp;
    if (cc.P < 0.0) {
        // normalize P >= 0 by the a -> a + pi shift; the sign moves into k
        // so that (k*P, k*e^{ia}, k*e^{-ia}) still solves the system exactly
        cc.P = -cc.P;
        cc.k = -amp;
        cc.a += std::numbers::pi;
        if (cc.a >= kTwoPi) cc.a -= kTwoPi;
    }
    return cc;
}

ComplexConstants complex_constants(const Params& p, Point z0) {
    return complex_constants(p, roots(char_poly(p)), z0);
}

std::pair<double, double> sigma_tau(const ComplexConstants& c, long n) {
    const double growth = 2.0 * std::pow(c.rho / c.lambda, static_cast<double>(n));
    const double angle = c.a + static_cast<double>(n) * c.theta;
    return {growth * std::cos(angle), growth * std::sin(angle)};
}

double LineL::distance(Point z) const {
    return std::abs(residual(z)) / std::hypot(a, b);
}

double LineL::parallel_distance(Point z) const {
    return std::abs(a * z.x + b * z.y + parallel_c) / std::hypot(a, b);
}

Point LineL::point_at(double t) const {
    const double n2 = a * a + b * b;
    const double n = std::sqrt(n2);
    return Point{-c * a / n2 - t * b / n, -c * b / n2 + t * a / n};
}

LineL line_L(const Params& p, double lambda1) {
    // beta2*x - (beta1 - lambda)*y - (beta1 - lambda)*lambda = 0
    double a = p.beta2;
    double b = -(p.beta1 - lambda1);
    double c = -(p.beta1 - lambda1) * lambda1;
    const double nm = std::max(std::abs(a), std::abs(b));
    a /= nm;
    b /= nm;
    c /= nm;
    if (a < 0.0 || (a == 0.0 && b < 0.0)) {
        a = -a;
        b = -b;
        c = -c;
    }
    LineL l;
    l.a = a;
    l.b = b;
    l.c = c;
    l.lambda = lambda1;
    const double fx = (lambda1 * lambda1 - p.alpha2) / p.beta2;
    l.parallel_c = -(a * fx + b * lambda1);
    return l;
}

Point Conic::transform(Point z) const {
    return Point{mxx * z.x + mxy * z.y + mxc, myx * z.x + myy * z.y + myc};
}

Point Conic::inverse_transform(Point zb) const {
    const double det = mxx * myy - mxy * myx;
    const double tx = zb.x - mxc;
    const double ty = zb.y - myc;
    return Point{(myy * tx - mxy * ty) / det, (-myx * tx + mxx * ty) / det};
}

double Conic::residual(Point z) const {
    const Point t = transform(z);
    const double lhs = t.x * t.x + t.y * t.y;
    const double d = t.x - rho_lambda;
    const double rhs = eccentricity * eccentricity * d * d;
    return std::abs(lhs - rhs) / std::max({1.0, lhs, rhs});
}

std::optional<Conic> conic_of(const Params& p, const Spectrum& s, Point z0, std::string* why) {
    auto reject = [&](const std::string& reason) -> std::optional<Conic> {
        if (why) *why = reason;
        return std::nullopt;
    };
    if (s.regime != Regime::ComplexEqualModulus) {
        return reject("not applicable: |lambda| != rho");
    }
    const double lambda = s.real_roots.front().value;
    const double rho = s.complex_pair->rho;
    const double theta = s.complex_pair->theta;
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double scale = std::max(std::abs(lambda), rho);
    if (std::abs(st) <= 1e-12) {
        return reject("not applicable: sin(theta) ~ 0, transform degenerates");
    }
    if (std::abs(lambda * ct - rho) <= 1e-12 * scale) {
        return reject("not applicable: lambda*cos(theta) = rho, transform degenerates");
    }

    ComplexConstants cc;
    try {
        cc = complex_constants(p, s, z0);
    } catch (const singular_system_error&) {
        return reject("not applicable: constants system numerically singular");
    }
    if (cc.k == 0.0) {
        return reject("not applicable: z0 is the fixed point (maps to the focus)");
    }
    if (std::abs(cc.P) <= 1e-9) {
        return reject("not applicable: z0 lies on L (P = 0)");
    }

    const double den = lambda * ct - rho;
    Conic k;
    k.mxx = lambda * p.beta2 / (2.0 * den);
    k.mxy = -rho * lambda * ct / den;
    k.mxc = lambda * (p.alpha2 - rho * rho) / (2.0 * den) + rho * lambda * lambda * ct / den;
    k.myx = p.beta2 / (2.0 * st);
    k.myy = -(lambda + rho * ct) / st;
    k.myc = (p.alpha2 - rho * rho) / (2.0 * st) + lambda * (lambda + rho * ct) / st;
    k.P = cc.P;
    k.eccentricity = 2.0 / cc.P;
    k.rho_lambda = rho * lambda;
    return k;
}

std::optional<Conic> conic_of(const Params& p, Point z0, std::string* why) {
    return conic_of(p, roots(char_poly(p)), z0, why);
}

}  // namespace ratsys
