#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ratsys/core.hpp"
#include "ratsys/spectrum.hpp"

// The forbidden set: initial conditions whose orbit reaches a zero
// denominator at some finite step. It is the countable union over n >= 1 of
// the lines
//
//   a1(n)*y0 + a2(n)*beta2*x0 + a2(n)*alpha2 + a0(n) = 0,
//
// where A^n = a0(n)*I + a1(n)*A + a2(n)*A^2. A point on the line with
// witness n dies exactly when computing iterate n.

namespace ratsys {

/// A line a*x + b*y + c = 0, normalized so max(|a|,|b|) = 1 and the first
/// nonzero of (a, b) is positive. witness_n is the iteration step at which
/// points on the line hit the zero denominator.
struct Line {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    std::size_t witness_n = 0;

    /// Signed a*x + b*y + c; Euclidean distance is |residual| / hypot(a, b).
    double residual(Point z) const { return a * z.x + b * z.y + c; }
    double distance(Point z) const;
    /// A point of the line, parameterized by arc position t.
    Point point_at(double t) const;
};

struct ForbiddenSet {
    std::vector<Line> lines;           // deduplicated, each keeping its smallest witness
    std::vector<std::string> diagnostics;
};

inline constexpr std::size_t kDefaultForbiddenHorizon = 64;
inline constexpr double kDefaultMembershipTol = 1e-9;

/// Lines of the forbidden set for n = 1..horizon. Degenerate tuples with
/// a = b = 0 and c != 0 are skipped with a diagnostic (the linear relation
/// is unsatisfiable, no initial condition fails at that step); a = b = c = 0
/// would flag the whole plane and cannot occur for validated Params.
/// Duplicate lines keep their smallest witness.
ForbiddenSet forbidden_lines(const Params& p, std::size_t horizon = kDefaultForbiddenHorizon);

/// Smallest n <= horizon whose forbidden line contains z0 within Euclidean
/// distance tol, or nullopt.
std::optional<std::size_t> is_forbidden(const Params& p, Point z0,
                                        std::size_t horizon = kDefaultForbiddenHorizon,
                                        double tol = kDefaultMembershipTol);

}  // namespace ratsys
