#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ratsys/core.hpp"
#include "ratsys/spectrum.hpp"

// Closed-form solutions for every parameter regime.
//
// For beta2 != 0 the orbit is recovered from the scalar linear recurrence
//
//   v_{n+3} = beta1*v_{n+2} + alpha2*v_{n+1} - (beta1*alpha2 - beta2*alpha1)*v_n
//
// with v_{-1} = 1, v_0 = y0, v_1 = beta2*x0 + alpha2, through
//
//   x_n = (v_{n+1}/v_{n-1})/beta2 - alpha2/beta2,   y_n = v_n/v_{n-1}.
//
// For beta2 = 0 the y-equation uncouples into the 2-periodic y_{n+1} =
// alpha2/y_n and x_n has an explicit even/odd form.

namespace ratsys {

/// Raised by solve_beta2_nonzero when v(n-1) vanishes within tolerance:
/// the initial condition sits on the forbidden set.
struct forbidden_orbit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised by complex_constants when the Vandermonde-like system is
/// numerically singular (theta collapsing to 0 or pi).
struct singular_system_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Prefix v(-1), v(0), ..., v(n) of the linear recurrence. Entries are
/// reproduced bit-for-bit by v_step, so the defining relation can be checked
/// exactly as evaluated.
struct VSequence {
    Params params;
    std::vector<double> values;  // values[i] = v(i - 1)

    double at(long i) const { return values[static_cast<std::size_t>(i + 1)]; }
    long max_index() const { return static_cast<long>(values.size()) - 2; }
};

/// One recurrence step v(n+3) from (v(n), v(n+1), v(n+2)), evaluated in
/// extended precision and rounded once.
double v_step(const Params& p, double v0, double v1, double v2);

VSequence v_sequence(const Params& p, Point z0, std::size_t n);

/// n-th iterate from the v-recurrence (beta2 != 0). The rolling window is
/// rescaled by exact powers of two when it leaves a safe magnitude range,
/// so the ratios survive arbitrarily long growth or decay.
Point solve_beta2_nonzero(const Params& p, Point z0, std::size_t n,
                          double forbidden_tol = 1e-12);

/// n-th iterate from the explicit even/odd formulas (beta2 = 0, requires
/// beta1*alpha2 != 0 and y0 != 0; the line y = 0 is the entire forbidden
/// set in this case).
Point solve_beta2_zero(const Params& p, Point z0, std::size_t n);

/// Constants of the complex-regime representation
///   v_n = k * (P*lambda^n + 2*rho^n*cos(a + n*theta)).
/// P is normalized nonnegative by shifting a by pi when needed, which makes
/// the sign of k follow the lambda-component: (k*P, k*e^{ia}, k*e^{-ia})
/// always solves the defining 3x3 system. k == 0 marks the eigendirection
/// (z0 is the fixed point), where the cosine term is absent and P is
/// conventionally 1. P == 0 exactly when z0 lies on the line L.
struct ComplexConstants {
    double P = 0.0;
    double a = 0.0;       // in [0, 2*pi)
    double k = 0.0;       // signed amplitude, see above
    double lambda = 0.0;  // the real eigenvalue
    double rho = 0.0;
    double theta = 0.0;
    // raw solution of the linear system: c1 = k*P, c2 = k*e^{ia}
    double c1 = 0.0;
    double c2_re = 0.0;
    double c2_im = 0.0;
};

ComplexConstants complex_constants(const Params& p, const Spectrum& s, Point z0);
ComplexConstants complex_constants(const Params& p, Point z0);

/// sigma_n = 2*(rho/lambda)^n*cos(a + n*theta) and the sine companion.
std::pair<double, double> sigma_tau(const ComplexConstants& c, long n);

/// The exceptional line beta2*x = (beta1 - lambda)*(y + lambda) attached to
/// a real eigenvalue, normalized like a forbidden Line, together with the
/// parallel line through the associated fixed point (a*x + b*y +
/// parallel_c = 0). The fixed point itself never lies on L.
struct LineL {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double parallel_c = 0.0;
    double lambda = 0.0;

    double residual(Point z) const { return a * z.x + b * z.y + c; }
    double distance(Point z) const;
    double parallel_distance(Point z) const;
    Point point_at(double t) const;
};

LineL line_L(const Params& p, double lambda1);

/// Invariant conic of the |lambda| = rho regime. The affine change of
/// variables (x, y) -> (xb, yb) sends the orbit onto
///   xb^2 + yb^2 = (2/P)^2 * (xb - rho*lambda)^2
/// with focus (0,0), directrix xb = rho*lambda and eccentricity 2/P; the
/// fixed point maps to the focus and never lies on the conic.
struct Conic {
    // xb = mxx*x + mxy*y + mxc,  yb = myx*x + myy*y + myc
    double mxx = 0.0, mxy = 0.0, mxc = 0.0;
    double myx = 0.0, myy = 0.0, myc = 0.0;
    double eccentricity = 0.0;
    double rho_lambda = 0.0;  // directrix position
    double P = 0.0;

    Point transform(Point z) const;
    Point inverse_transform(Point zb) const;
    /// |xb^2 + yb^2 - e^2 (xb - rho*lambda)^2| scaled by the larger side.
    double residual(Point z) const;
};

/// Constructs the invariant conic through z0. Returns nullopt when the
/// regime is not the |lambda| = rho complex case, when z0 lies on L
/// (P = 0) or is the fixed point, or when the change of variables
/// degenerates (lambda*cos(theta) = rho); the reason is appended to *why
/// when given.
std::optional<Conic> conic_of(const Params& p, const Spectrum& s, Point z0,
                              std::string* why = nullptr);
std::optional<Conic> conic_of(const Params& p, Point z0, std::string* why = nullptr);

}  // namespace ratsys
