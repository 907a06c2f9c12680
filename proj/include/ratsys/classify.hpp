#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ratsys/core.hpp"
#include "ratsys/forbidden.hpp"
#include "ratsys/solution.hpp"
#include "ratsys/spectrum.hpp"

// Equilibria, periodicity, stability verdicts and the full asymptotic
// classification of initial conditions, plus the taxonomy for nonnegative
// coefficients.

namespace ratsys {

struct negative_coefficient_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Stability {
    AsymptoticallyStable,
    StableNotAsymptotic,
    Unstable,
    AttractingUnstable,  // attracts an open set yet fails Lyapunov stability
};

const char* stability_name(Stability s);

/// Verdict plus the moduli of the two Jacobian eigenvalues at the fixed
/// point, which are lambda2/lambda and lambda3/lambda for the equilibrium
/// associated to lambda.
struct StabilityVerdict {
    Stability kind = Stability::Unstable;
    double jac_modulus_1 = 0.0;
    double jac_modulus_2 = 0.0;
};

/// A fixed point. Its y-coordinate equals the real eigenvalue it is
/// associated to.
struct Equilibrium {
    Point point{};
    double lambda = 0.0;
    int multiplicity = 1;
    StabilityVerdict stability{};
};

/// All equilibria of the system. For beta2 = 0, alpha1 = 0, alpha2 = beta1^2
/// the system has, besides the isolated fixed point, a whole line of
/// equilibria y = beta1, reported separately.
struct EquilibriaResult {
    std::vector<Equilibrium> isolated;
    std::optional<double> line_y;  // equilibria (x, line_y) for every x
    std::optional<StabilityVerdict> line_stability;
};

EquilibriaResult equilibria(const Params& p, const Spectrum& s);
EquilibriaResult equilibria(const Params& p);

/// Stability of an equilibrium from the eigenvalue structure. For beta2 != 0
/// this is: unstable below the spectral radius; on the spectral radius,
/// stable iff every maximal-modulus eigenvalue is simple (asymptotically iff
/// lambda is the unique one), and attracting-but-unstable exactly when
/// lambda itself is the non-simple dominant eigenvalue. For beta2 = 0 the
/// explicit solution gives stable-not-asymptotic verdicts even in the
/// globally 2-periodic double-root case alpha1 = 0, alpha2 = beta1^2.
StabilityVerdict stability(const Params& p, const Spectrum& s, const Equilibrium& e);

/// Witness 2-cycle when one exists: prime period-2 solutions exist iff
/// alpha1*beta2 = 0. Returns the cycle {z, step(z)} for a concrete starting
/// point, or nullopt.
std::optional<std::array<Point, 2>> period2_criterion(const Params& p);

/// Smallest p >= 1 such that a suffix of the orbit is p-periodic within
/// max-norm tol (scaled by the orbit magnitude), covering at least two full
/// periods and with p at most a third of the orbit length. Returns
/// (period, phase) where phase is the first index of the periodic suffix.
std::optional<std::pair<std::size_t, std::size_t>> detect_period(
    const Orbit& o, double tol = 1e-8);

enum class BehaviorKind {
    ConvergesToFixedPoint,
    ConvergesTo2Cycle,
    Periodic,
    Unbounded,
    OnInvariantConic,
    AccumulatesOnLine,
    StartsForbidden,
};

const char* behavior_name(BehaviorKind k);

/// Classified asymptotic fate of one initial condition, carrying the target
/// object of the verdict.
struct Behavior {
    BehaviorKind kind = BehaviorKind::Unbounded;
    std::optional<Equilibrium> equilibrium;  // ConvergesToFixedPoint
    std::vector<Point> cycle;                // ConvergesTo2Cycle / Periodic
    std::size_t period = 0;                  // Periodic
    std::optional<LineL> line;               // AccumulatesOnLine (with parallel)
    std::optional<Conic> conic;              // OnInvariantConic
    std::size_t forbidden_witness = 0;       // StartsForbidden
    std::vector<std::string> diagnostics;
};

struct ClassifyOptions {
    std::size_t forbidden_horizon = kDefaultForbiddenHorizon;
    double membership_tol = kDefaultMembershipTol;
    double cluster_tol = kDefaultClusterTol;
    double divide_tol = kDefaultDivideTol;
    double period_tol = 1e-8;
    std::size_t budget = 10000;       // cap for numeric confirmation runs
    std::size_t rational_qmax = 64;   // continued-fraction bound for theta/pi
    double rational_tol = 1e-10;
};

/// Dispatches the exact case table of the dynamics analysis: forbidden
/// check first, then by beta2 and the spectral regime. Classification is
/// analytic; the budget only bounds confirmation probes (prime period
/// detection on exceptional lines).
Behavior classify_behavior(const Params& p, Point z0, const ClassifyOptions& opts = {});

/// Best rational approximation p/q of x with q <= qmax via continued
/// fractions; engaged iff |x - p/q| <= tol. Used to decide theta/pi
/// rationality for orbits on the exceptional line.
std::optional<std::pair<long, long>> rational_approx(double x, long qmax, double tol);

enum class NonnegKind {
    NoNonnegPeriodicsUnbounded,    // beta2 = 0, alpha2 <= beta1^2 (excluding the 2-periodic case)
    Globally2Periodic,             // beta2 = 0, alpha1 = 0, alpha2 = beta1^2
    NonAttractingFixedPlus2Cycles, // beta2 = 0, alpha2 > beta1^2
    BoundedWith2CycleLine,         // alpha1 = 0 != beta2, subcase a/b/c by alpha2 vs beta1^2
    PositiveGlobalAttractor,       // alpha1*beta2 != 0, (alpha2, beta1) != (0, 0)
    Globally3Periodic,             // alpha2 = beta1 = 0, alpha1*beta2 > 0
};

const char* nonneg_kind_name(NonnegKind k);

/// Report for nonnegative coefficients. checkpoints records the verified
/// spectral facts behind the attractor cases ((A+I)^2 > 0, Perron root
/// dominance over beta1 and sqrt(alpha2), L-avoidance of the nonnegative
/// quadrant).
struct NonnegReport {
    NonnegKind kind = NonnegKind::PositiveGlobalAttractor;
    char subcase = 0;  // 'a'/'b'/'c' for BoundedWith2CycleLine
    std::optional<Equilibrium> equilibrium;
    std::vector<std::string> checkpoints;
};

NonnegReport classify_nonneg(const Params& p);

}  // namespace ratsys
