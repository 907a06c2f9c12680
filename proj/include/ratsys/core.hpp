#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Core definition of the planar rational system
//
//   x_{n+1} = (alpha1 + beta1*x_n) / y_n
//   y_{n+1} = (alpha2 + beta2*x_n) / y_n
//
// together with direct iteration, which serves as the ground-truth oracle
// for the closed-form machinery in the other headers.

namespace ratsys {

/// Raised by validate_params when alpha1*beta2 == alpha2*beta1, i.e. the
/// associated matrix is singular and the system collapses to a scalar
/// Riccati equation (or admits no complete solution at all).
struct degenerate_riccati_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised by step when the denominator y is zero within tolerance.
struct division_by_zero_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The four real coefficients of the system. Construct through
/// validate_params; the library assumes alpha1*beta2 != alpha2*beta1.
struct Params {
    double alpha1 = 0.0;
    double beta1 = 0.0;
    double alpha2 = 0.0;
    double beta2 = 0.0;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Default relative divide guard: a step from (x, y) is rejected when
/// |y| <= tol * max(1, |alpha2| + |beta2*x|).
inline constexpr double kDefaultDivideTol = 1e-12;

/// Checks finiteness and the non-degeneracy condition
/// alpha1*beta2 != alpha2*beta1 (exact comparison, no tolerance: nearby
/// systems are legitimate and a caller perturbing deliberately must not be
/// second-guessed). Throws degenerate_riccati_error or std::invalid_argument.
Params validate_params(double alpha1, double beta1, double alpha2, double beta2);

/// One application of the map. Throws division_by_zero_error when
/// |z.y| <= tol * max(1, |alpha2| + |beta2*z.x|).
Point step(const Params& p, Point z, double tol = kDefaultDivideTol);

/// A finite trajectory. For a complete run of n steps, points holds n+1
/// entries (index k is the k-th iterate, points[0] == start). When the
/// divide guard trips while computing iterate k, status is HitForbidden,
/// stop_index == k, points holds exactly k entries and the last stored
/// point has |y| below the guard.
struct Orbit {
    enum class Status { Complete, HitForbidden };

    Point start{};
    std::vector<Point> points;
    Status status = Status::Complete;
    std::size_t stop_index = 0;  // horizon when Complete, failing step when HitForbidden

    bool complete() const { return status == Status::Complete; }
};

/// Applies step up to n times, folding the division error into the status.
/// Never throws for validated Params.
Orbit iterate(const Params& p, Point z0, std::size_t n, double tol = kDefaultDivideTol);

/// Row-major 3x3 matrix, just enough linear algebra for the companion form.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    static Mat3 identity();
    Mat3 operator*(const Mat3& o) const;
    std::array<double, 3> operator*(const std::array<double, 3>& v) const;
    double det() const;
};

using CompanionMatrix = Mat3;

/// The associated matrix
///   ( beta1  0  alpha1 )
///   ( beta2  0  alpha2 )
///   (   0    1    0    )
/// whose determinant beta2*alpha1 - beta1*alpha2 is nonzero for validated
/// Params. Iteration of the system is the projective action of this matrix
/// on (x, y, 1).
CompanionMatrix companion_matrix(const Params& p);

}  // namespace ratsys
