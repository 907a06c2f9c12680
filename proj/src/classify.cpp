#include "ratsys/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace ratsys {

namespace {

double point_scale(Point z) { return std::max({1.0, std::abs(z.x), std::abs(z.y)}); }

bool points_close(Point a, Point b, double tol) {
    const double s = std::max(point_scale(a), point_scale(b));
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)) <= tol * s;
}

// moduli of all eigenvalues with multiplicity
std::vector<double> eigen_moduli(const Spectrum& s) {
    std::vector<double> mods;
    for (const auto& r : s.real_roots) {
        for (int i = 0; i < r.multiplicity; ++i) mods.push_back(std::abs(r.value));
    }
    if (s.complex_pair) {
        mods.push_back(s.complex_pair->rho);
        mods.push_back(s.complex_pair->rho);
    }
    return mods;
}

// |lambda2/lambda| and |lambda3/lambda| for the fixed point associated to
// lambda: drop one copy of lambda from the eigenvalue multiset
std::array<double, 2> jacobian_moduli(const Spectrum& s, double lambda) {
    std::vector<double> mods = eigen_moduli(s);
    const double target = std::abs(lambda);
    auto it = std::min_element(mods.begin(), mods.end(), [&](double a, double b) {
        return std::abs(a - target) < std::abs(b - target);
    });
    mods.erase(it);
    std::array<double, 2> out{mods[0] / target, mods[1] / target};
    if (out[0] < out[1]) std::swap(out[0], out[1]);
    return out;
}

Equilibrium make_equilibrium(const Params& p, const Spectrum& s, Point pt, double lambda,
                             int multiplicity) {
    Equilibrium e;
    e.point = pt;
    e.lambda = lambda;
    e.multiplicity = multiplicity;
    e.stability = stability(p, s, e);
    return e;
}

}  // namespace

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::AsymptoticallyStable: return "asymptotically_stable";
        case Stability::StableNotAsymptotic: return "stable_not_asymptotic";
        case Stability::Unstable: return "unstable";
        case Stability::AttractingUnstable: return "attracting_unstable";
    }
    return "unknown";
}

const char* behavior_name(BehaviorKind k) {
    switch (k) {
        case BehaviorKind::ConvergesToFixedPoint: return "converges_to_fixed_point";
        case BehaviorKind::ConvergesTo2Cycle: return "converges_to_2_cycle";
        case BehaviorKind::Periodic: return "periodic";
        case BehaviorKind::Unbounded: return "unbounded";
        case BehaviorKind::OnInvariantConic: return "on_invariant_conic";
        case BehaviorKind::AccumulatesOnLine: return "accumulates_on_line";
        case BehaviorKind::StartsForbidden: return "starts_forbidden";
    }
    return "unknown";
}

const char* nonneg_kind_name(NonnegKind k) {
    switch (k) {
        case NonnegKind::NoNonnegPeriodicsUnbounded: return "no_nonneg_periodics_unbounded";
        case NonnegKind::Globally2Periodic: return "globally_2_periodic";
        case NonnegKind::NonAttractingFixedPlus2Cycles:
            return "non_attracting_fixed_plus_2_cycles";
        case NonnegKind::BoundedWith2CycleLine: return "bounded_with_2_cycle_line";
        case NonnegKind::PositiveGlobalAttractor: return "positive_global_attractor";
        case NonnegKind::Globally3Periodic: return "globally_3_periodic";
    }
    return "unknown";
}

EquilibriaResult equilibria(const Params& p, const Spectrum& s) {
    EquilibriaResult out;
    if (p.beta2 != 0.0) {
        // one fixed point ((lambda^2 - alpha2)/beta2, lambda) per distinct
        // real eigenvalue
        for (const auto& r : s.real_roots) {
            const Point pt{(r.value * r.value - p.alpha2) / p.beta2, r.value};
            out.isolated.push_back(make_equilibrium(p, s, pt, r.value, r.multiplicity));
        }
        return out;
    }

    // beta2 = 0: solve alpha2 = y^2, alpha1 + beta1*x = x*y directly
    if (p.alpha2 < 0.0) return out;  // no fixed points
    const double sq = std::sqrt(p.alpha2);
    const double b1sq = p.beta1 * p.beta1;
    if (p.alpha2 != b1sq) {
        out.isolated.push_back(make_equilibrium(
            p, s, Point{p.alpha1 / (sq - p.beta1), sq}, sq, 1));
        out.isolated.push_back(make_equilibrium(
            p, s, Point{-p.alpha1 / (sq + p.beta1), -sq}, -sq, 1));
    } else if (p.alpha1 != 0.0) {
        out.isolated.push_back(make_equilibrium(
            p, s, Point{-p.alpha1 / (2.0 * p.beta1), -p.beta1}, -p.beta1, 1));
    } else {
        // isolated (0, -beta1) plus the whole line of equilibria y = beta1
        out.isolated.push_back(
            make_equilibrium(p, s, Point{0.0, -p.beta1}, -p.beta1, 1));
        out.line_y = p.beta1;
        Equilibrium probe;
        probe.lambda = p.beta1;
        probe.multiplicity = 2;
        probe.point = Point{0.0, p.beta1};
        out.line_stability = stability(p, s, probe);
    }
    return out;
}

EquilibriaResult equilibria(const Params& p) { return equilibria(p, roots(char_poly(p))); }

StabilityVerdict stability(const Params& p, const Spectrum& s, const Equilibrium& e) {
    StabilityVerdict v;
    const auto jm = jacobian_moduli(s, e.lambda);
    v.jac_modulus_1 = jm[0];
    v.jac_modulus_2 = jm[1];

    if (p.beta2 == 0.0) {
        // explicit-solution verdicts; note the globally 2-periodic case
        // alpha1 = 0, alpha2 = beta1^2 is stable despite the double root
        const double b1sq = p.beta1 * p.beta1;
        if (p.alpha2 == b1sq) {
            v.kind = (p.alpha1 == 0.0) ? Stability::StableNotAsymptotic : Stability::Unstable;
        } else if (b1sq > p.alpha2) {
            v.kind = Stability::Unstable;
        } else {
            v.kind = Stability::StableNotAsymptotic;
        }
        return v;
    }

    const double tol = kDefaultClusterTol * std::max(1.0, s.spectral_radius);
    const double lm = std::abs(e.lambda);
    if (lm < s.spectral_radius - tol) {
        v.kind = Stability::Unstable;
        return v;
    }

    // lambda sits on the spectral radius: inspect all maximal-modulus roots
    bool all_simple = true;
    int entities_at_max = 0;  // distinct roots at the radius (pair counts once)
    for (const auto& r : s.real_roots) {
        if (std::abs(std::abs(r.value) - s.spectral_radius) <= tol) {
            ++entities_at_max;
            if (r.multiplicity > 1) all_simple = false;
        }
    }
    if (s.complex_pair && std::abs(s.complex_pair->rho - s.spectral_radius) <= tol) {
        entities_at_max += 2;
    }

    if (all_simple) {
        v.kind = (entities_at_max == 1) ? Stability::AsymptoticallyStable
                                        : Stability::StableNotAsymptotic;
    } else {
        v.kind = (e.multiplicity > 1) ? Stability::AttractingUnstable : Stability::Unstable;
    }
    return v;
}

std::optional<std::array<Point, 2>> period2_criterion(const Params& p) {
    if (p.alpha1 == 0.0) {
        // (0, y0) is 2-periodic for every y0 with y0^2 != alpha2
        const double y0 = (std::abs(p.alpha2 - 1.0) > 0.5) ? 1.0 : 2.0;
        const Point z{0.0, y0};
        return std::array<Point, 2>{z, step(p, z)};
    }
    if (p.beta2 == 0.0) {
        const Point z{0.0, -p.beta1};
        return std::array<Point, 2>{z, step(p, z)};
    }
    return std::nullopt;
}

std::optional<std::pair<std::size_t, std::size_t>> detect_period(const Orbit& o, double tol) {
    if (!o.complete() || o.points.size() < 3) return std::nullopt;
    const std::size_t len = o.points.size();

    double scale = 1.0;
    for (const Point& z : o.points) {
        scale = std::max({scale, std::abs(z.x), std::abs(z.y)});
    }
    const double eff = tol * scale;

    for (std::size_t period = 1; 3 * period <= len; ++period) {
        // largest suffix on which the shift-by-period distance stays small
        std::size_t suffix_start = 0;
        for (std::size_t k = len - period; k-- > 0;) {
            const Point& a = o.points[k];
            const Point& b = o.points[k + period];
            if (std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)) > eff) {
                suffix_start = k + 1;
                break;
            }
        }
        if (len - suffix_start >= 3 * period) {
            return std::make_pair(period, suffix_start);
        }
    }
    return std::nullopt;
}

std::optional<std::pair<long, long>> rational_approx(double x, long qmax, double tol) {
    for (long q = 1; q <= qmax; ++q) {
        const double scaled = x * static_cast<double>(q);
        const double rounded = std::round(scaled);
        if (std::abs(scaled - rounded) <= tol * static_cast<double>(q)) {
            long num = static_cast<long>(rounded);
            const long g = std::gcd(std::labs(num), q);
            return std::make_pair(num / g, q / g);
        }
    }
    return std::nullopt;
}

namespace {

Behavior behavior_fixed(const Equilibrium& e) {
    Behavior b;
    b.kind = BehaviorKind::ConvergesToFixedPoint;
    b.equilibrium = e;
    return b;
}

Behavior behavior_periodic(const Params& p, Point z0, std::size_t period, double divide_tol) {
    Behavior b;
    b.kind = BehaviorKind::Periodic;
    b.period = period;
    Point z = z0;
    for (std::size_t i = 0; i < period; ++i) {
        b.cycle.push_back(z);
        try {
            z = step(p, z, divide_tol);
        } catch (const division_by_zero_error&) {
            // a cycle point under the divide guard: the start is effectively
            // on the forbidden set after all
            Behavior f;
            f.kind = BehaviorKind::StartsForbidden;
            f.forbidden_witness = i + 1;
            f.diagnostics.push_back("periodic cycle passes under the divide guard");
            return f;
        }
    }
    return b;
}

// beta2 = 0: the explicit-solution case table
Behavior classify_beta2_zero(const Params& p, Point z0, const ClassifyOptions& opts) {
    const double b1sq = p.beta1 * p.beta1;
    const double tol = opts.membership_tol;

    if (p.alpha2 == b1sq) {
        if (p.alpha1 == 0.0) {
            return behavior_periodic(p, z0, 2, opts.divide_tol);  // globally 2-periodic
        }
        if (std::abs(z0.y + p.beta1) <= tol * std::max(1.0, std::abs(p.beta1))) {
            return behavior_periodic(p, z0, 2, opts.divide_tol);  // the (x0, -beta1) family
        }
        Behavior b;
        b.kind = BehaviorKind::Unbounded;
        return b;
    }

    if (p.alpha2 == -b1sq) {
        // globally 4-periodic; prime period 2 on one line
        const double r = 2.0 * b1sq * z0.x + p.alpha1 * (p.beta1 + z0.y);
        const double scale =
            std::max({1.0, std::abs(2.0 * b1sq * z0.x), std::abs(p.alpha1 * (p.beta1 + z0.y))});
        return behavior_periodic(p, z0, std::abs(r) <= tol * scale ? 2 : 4, opts.divide_tol);
    }

    const double xhat = p.alpha1 * (p.beta1 + z0.y) / (p.alpha2 - b1sq);
    if (std::abs(z0.x - xhat) <= tol * std::max(1.0, std::abs(xhat))) {
        return behavior_periodic(p, z0, 2, opts.divide_tol);
    }
    if (b1sq > std::abs(p.alpha2)) {
        Behavior b;
        b.kind = BehaviorKind::Unbounded;
        return b;
    }
    // b1sq < |alpha2|: bounded, tends to the 2-cycle sharing its even y
    Behavior b;
    b.kind = BehaviorKind::ConvergesTo2Cycle;
    const Point even{xhat, z0.y};
    b.cycle = {even, step(p, even, opts.divide_tol)};
    return b;
}

// the alpha1 = 0, alpha2 > 0 family (two distinct real roots of equal
// modulus; beta2 != 0)
Behavior classify_same_modulus(const Params& p, Point z0, const Spectrum& s,
                               const EquilibriaResult& eq, const ClassifyOptions& opts) {
    Behavior b;
    if (p.alpha1 != 0.0) {
        std::ostringstream d;
        d << "alpha1 = " << p.alpha1
          << " is nonzero but the spectrum shows a same-modulus real pair; classified as the "
             "alpha1 = 0 family (regime boundary)";
        b.diagnostics.push_back(d.str());
    }

    // on the invariant line x = 0 every non-equilibrium point is 2-periodic
    if (std::abs(z0.x) <= opts.membership_tol * point_scale(z0)) {
        Behavior pb = behavior_periodic(p, z0, 2, opts.divide_tol);
        pb.diagnostics = b.diagnostics;
        return pb;
    }

    auto find_beta_equilibrium = [&]() -> const Equilibrium* {
        // the fixed point associated to the beta1 root
        for (const auto& e : eq.isolated) {
            if (std::abs(e.lambda - p.beta1) <=
                kDefaultClusterTol * std::max(1.0, s.spectral_radius)) {
                return &e;
            }
        }
        return &eq.isolated.front();
    };

    if (s.regime == Regime::TwoRealSameModulusBetaEqual ||
        s.regime == Regime::TwoRealSameModulusBetaDominant) {
        Behavior fb = behavior_fixed(*find_beta_equilibrium());
        fb.diagnostics = b.diagnostics;
        return fb;
    }

    // beta recessive: two exceptional unbounded lines, everything else tends
    // to a 2-cycle on x = 0
    const double sq = std::sqrt(p.alpha2);
    const double diff = p.beta1 * p.beta1 - p.alpha2;  // negative here
    {
        // beta2*x + ((alpha2 - beta1^2)/beta1)*y = 0
        const double la = p.beta2;
        const double lb = -diff / p.beta1;
        const double dist = std::abs(la * z0.x + lb * z0.y) / std::hypot(la, lb);
        if (dist <= opts.membership_tol * point_scale(z0)) {
            b.kind = BehaviorKind::Unbounded;
            b.diagnostics.push_back("on the exceptional line beta2*x + ((alpha2-beta1^2)/beta1)*y = 0");
            return b;
        }
    }
    {
        const double xs = diff / p.beta2;  // x = (beta1^2 - alpha2)/beta2
        if (std::abs(z0.x - xs) <= opts.membership_tol * std::max(1.0, std::abs(xs))) {
            b.kind = BehaviorKind::Unbounded;
            b.diagnostics.push_back("on the exceptional line x = (beta1^2-alpha2)/beta2");
            return b;
        }
    }
    const double p1 = p.beta1 * p.beta2 * z0.x / diff;
    const double d = sq * (diff - p.beta2 * z0.x) / diff;
    const double kconst = (z0.y - p1) / d;
    b.kind = BehaviorKind::ConvergesTo2Cycle;
    b.cycle = {Point{0.0, kconst * sq}, Point{0.0, sq / kconst}};
    return b;
}

// complex pair (beta2 != 0)
Behavior classify_complex(const Params& p, Point z0, const Spectrum& s,
                          const EquilibriaResult& eq, const ClassifyOptions& opts) {
    Behavior b;
    const double lambda = s.real_roots.front().value;
    const LineL L = line_L(p, lambda);

    bool on_line = L.distance(z0) <= opts.membership_tol * point_scale(z0);
    std::optional<ComplexConstants> cc;
    try {
        cc = complex_constants(p, s, z0);
        const bool p_zero = std::abs(cc->P) <= 1e-9;
        if (p_zero != on_line) {
            std::ostringstream d;
            d << "L-membership tests disagree (P = " << cc->P << ", distance to L = "
              << L.distance(z0) << "); using the P test";
            b.diagnostics.push_back(d.str());
        }
        on_line = p_zero;
    } catch (const singular_system_error&) {
        b.diagnostics.push_back(
            "constants system singular (theta near 0); falling back to geometric L test");
    }

    if (on_line) {
        const double t = s.complex_pair->theta / std::numbers::pi;
        const auto frac = rational_approx(t, static_cast<long>(opts.rational_qmax),
                                          opts.rational_tol);
        if (!frac) {
            b.kind = BehaviorKind::Unbounded;
            b.line = L;
            std::ostringstream d;
            d << "on L with no small-period rational detected for theta/pi = " << t
              << " (q <= " << opts.rational_qmax << "); treated as unbounded on L";
            b.diagnostics.push_back(d.str());
            return b;
        }
        const std::size_t q = static_cast<std::size_t>(frac->second);
        // the orbit period divides q; probe for the prime period
        const std::size_t steps = std::min(opts.budget, 3 * q + 2);
        const Orbit orbit = iterate(p, z0, steps, opts.divide_tol);
        if (!orbit.complete()) {
            Behavior fb;
            fb.kind = BehaviorKind::StartsForbidden;
            fb.forbidden_witness = orbit.stop_index;
            fb.diagnostics = b.diagnostics;
            fb.diagnostics.push_back("forbidden hit beyond the configured horizon");
            return fb;
        }
        Behavior pb;
        pb.diagnostics = b.diagnostics;
        pb.kind = BehaviorKind::Periodic;
        pb.line = L;
        const auto det = detect_period(orbit, opts.period_tol);
        pb.period = det ? det->first : q;
        if (!det) {
            pb.diagnostics.push_back("period probe inconclusive; reporting the analytic period");
        }
        pb.cycle.assign(orbit.points.begin(),
                        orbit.points.begin() + static_cast<long>(pb.period));
        return pb;
    }

    switch (s.regime) {
        case Regime::ComplexDominantReal: {
            Behavior fb = behavior_fixed(eq.isolated.front());
            fb.diagnostics = b.diagnostics;
            return fb;
        }
        case Regime::ComplexRecessiveReal: {
            b.kind = BehaviorKind::AccumulatesOnLine;
            b.line = L;
            b.diagnostics.push_back(
                "bounded subsequences accumulate on L; unbounded ones follow the parallel "
                "line through the fixed point");
            return b;
        }
        default: {
            std::string why;
            auto conic = conic_of(p, s, z0, &why);
            b.kind = BehaviorKind::OnInvariantConic;
            if (conic) {
                b.conic = *conic;
            } else {
                b.diagnostics.push_back("conic transform unavailable: " + why);
            }
            b.line = L;
            // rational rotation number: the orbit visits finitely many
            // points of its conic, so the whole system is globally periodic
            if (const auto frac = rational_approx(s.complex_pair->theta / std::numbers::pi,
                                                  static_cast<long>(opts.rational_qmax),
                                                  opts.rational_tol)) {
                std::ostringstream d;
                d << "theta/pi = " << frac->first << "/" << frac->second
                  << ": the orbit is periodic on its conic (globally periodic system)";
                b.diagnostics.push_back(d.str());
            }
            return b;
        }
    }
}

}  // namespace

Behavior classify_behavior(const Params& p, Point z0, const ClassifyOptions& opts) {
    std::vector<std::string> forbidden_diag;
    if (const auto w = is_forbidden(p, z0, opts.forbidden_horizon, opts.membership_tol)) {
        // The geometric test over-flags in two ways: the forbidden lines
        // accumulate on L when |lambda| < rho, and orbits that merely
        // converge to the line y = 0 eventually die at the precision floor.
        // A genuine member dies at exactly its witness step (drift of one
        // step at most), so require the iteration oracle to agree.
        const Orbit probe = iterate(p, z0, opts.forbidden_horizon, opts.divide_tol);
        const bool confirmed =
            !probe.complete() &&
            (probe.stop_index >= *w ? probe.stop_index - *w : *w - probe.stop_index) <= 2;
        if (confirmed) {
            Behavior b;
            b.kind = BehaviorKind::StartsForbidden;
            b.forbidden_witness = probe.stop_index;
            return b;
        }
        std::ostringstream d;
        d << "geometric forbidden witness " << *w << " not confirmed by iteration (";
        if (probe.complete()) {
            d << "orbit completes " << opts.forbidden_horizon << " steps";
        } else {
            d << "orbit dies at the unrelated step " << probe.stop_index;
        }
        d << "); classifying analytically";
        forbidden_diag.push_back(d.str());
    }

    Behavior b = [&]() -> Behavior {
        const Spectrum s = roots(char_poly(p), opts.cluster_tol);
        const EquilibriaResult eq = equilibria(p, s);

        for (const auto& e : eq.isolated) {
            if (points_close(z0, e.point, opts.membership_tol)) return behavior_fixed(e);
        }
        if (eq.line_y &&
            std::abs(z0.y - *eq.line_y) <= opts.membership_tol * point_scale(z0)) {
            Equilibrium e;
            e.point = Point{z0.x, *eq.line_y};
            e.lambda = *eq.line_y;
            e.multiplicity = 2;
            e.stability = *eq.line_stability;
            return behavior_fixed(e);
        }

        if (p.beta2 == 0.0) return classify_beta2_zero(p, z0, opts);

        switch (s.regime) {
            case Regime::TwoRealSameModulusBetaDominant:
            case Regime::TwoRealSameModulusBetaEqual:
            case Regime::TwoRealSameModulusBetaRecessive:
                return classify_same_modulus(p, z0, s, eq, opts);
            case Regime::ComplexDominantReal:
            case Regime::ComplexEqualModulus:
            case Regime::ComplexRecessiveReal:
                return classify_complex(p, z0, s, eq, opts);
            default:
                break;
        }

        // all real roots, no two distinct of equal modulus
        const LineL L = line_L(p, s.real_roots.front().value);
        const bool on_line = L.distance(z0) <= opts.membership_tol * point_scale(z0);
        switch (s.regime) {
            case Regime::RealTriple:
                return behavior_fixed(eq.isolated.front());  // global attractor
            case Regime::RealDoubleDominant:
                // attracts everything except the other fixed point (handled above)
                return behavior_fixed(eq.isolated.front());
            case Regime::RealDoubleRecessive:
                return behavior_fixed(on_line ? eq.isolated.back() : eq.isolated.front());
            default:
                // three simple roots: L funnels into the middle equilibrium
                return behavior_fixed(on_line ? eq.isolated[1] : eq.isolated.front());
        }
    }();
    b.diagnostics.insert(b.diagnostics.begin(), forbidden_diag.begin(), forbidden_diag.end());
    return b;
}

NonnegReport classify_nonneg(const Params& p) {
    if (p.alpha1 < 0.0 || p.beta1 < 0.0 || p.alpha2 < 0.0 || p.beta2 < 0.0) {
        throw negative_coefficient_error("classify_nonneg requires nonnegative coefficients");
    }
    NonnegReport rep;
    const Spectrum s = roots(char_poly(p));
    const double b1sq = p.beta1 * p.beta1;

    if (p.beta2 == 0.0) {
        if (p.alpha2 > b1sq) {
            rep.kind = NonnegKind::NonAttractingFixedPlus2Cycles;
            const double sq = std::sqrt(p.alpha2);
            rep.equilibrium = make_equilibrium(
                p, s, Point{p.alpha1 / (sq - p.beta1), sq}, sq, 1);
            rep.checkpoints.push_back(
                "2-periodic line (alpha2-beta1^2)*x = alpha1*(beta1+y)");
        } else if (p.alpha2 == b1sq && p.alpha1 == 0.0) {
            rep.kind = NonnegKind::Globally2Periodic;
        } else {
            rep.kind = NonnegKind::NoNonnegPeriodicsUnbounded;
        }
        return rep;
    }

    if (p.alpha1 == 0.0) {
        rep.kind = NonnegKind::BoundedWith2CycleLine;
        const double sq = std::sqrt(p.alpha2);
        if (p.alpha2 < b1sq) {
            rep.subcase = 'a';
            rep.equilibrium = make_equilibrium(
                p, s, Point{(b1sq - p.alpha2) / p.beta2, p.beta1}, p.beta1, 1);
        } else if (p.alpha2 == b1sq) {
            rep.subcase = 'b';
            rep.equilibrium =
                make_equilibrium(p, s, Point{0.0, p.beta1}, p.beta1, 2);
        } else {
            rep.subcase = 'c';
            rep.equilibrium = make_equilibrium(p, s, Point{0.0, sq}, sq, 1);
            rep.checkpoints.push_back("equilibrium is not an attractor");
        }
        rep.checkpoints.push_back("2-periodic solutions fill the line x = 0");
        return rep;
    }

    // alpha1*beta2 > 0 from here on
    if (p.alpha2 == 0.0 && p.beta1 == 0.0) {
        rep.kind = NonnegKind::Globally3Periodic;
        const double lambda = std::cbrt(p.beta2 * p.alpha1);
        rep.equilibrium = make_equilibrium(
            p, s, Point{lambda * lambda / p.beta2, lambda}, lambda, 1);
        // A^3 = (beta2*alpha1) * I
        const Mat3 a = companion_matrix(p);
        const Mat3 a3 = a * a * a;
        bool ok = true;
        const double target = p.beta2 * p.alpha1;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const double want = (i == j) ? target : 0.0;
                if (std::abs(a3.m[i][j] - want) > 1e-12 * std::max(1.0, std::abs(target))) {
                    ok = false;
                }
            }
        }
        rep.checkpoints.push_back(ok ? "A^3 = (beta2*alpha1)*I verified"
                                     : "FAILED: A^3 != (beta2*alpha1)*I");
        return rep;
    }

    rep.kind = NonnegKind::PositiveGlobalAttractor;
    const CharPoly cp = char_poly(p);

    // irreducibility: (A+I)^2 entrywise positive
    {
        Mat3 ai = companion_matrix(p);
        for (int i = 0; i < 3; ++i) ai.m[i][i] += 1.0;
        const Mat3 sq2 = ai * ai;
        bool pos = true;
        for (const auto& row : sq2.m) {
            for (double v : row) pos = pos && v > 0.0;
        }
        rep.checkpoints.push_back(pos ? "(A+I)^2 entrywise positive (A irreducible)"
                                      : "FAILED: (A+I)^2 not entrywise positive");
    }

    // Perron root: the dominant real eigenvalue is positive and simple
    const double lambda1 = s.real_roots.front().value;
    {
        std::ostringstream d;
        const bool simple_dominant =
            s.real_roots.front().multiplicity == 1 && lambda1 > 0.0 &&
            std::abs(lambda1) >=
                s.spectral_radius - kDefaultClusterTol * std::max(1.0, s.spectral_radius);
        if (simple_dominant) {
            d << "Perron root " << lambda1 << " positive simple dominant";
        } else {
            d << "FAILED: dominant eigenvalue " << lambda1 << " not a simple Perron root";
        }
        rep.checkpoints.push_back(d.str());
    }

    // det(A - mu*I) = -p(mu): positive at beta1 and sqrt(alpha2), so both
    // sit strictly below the Perron root
    {
        const double at_beta1 = -cp.eval(p.beta1);
        const double expect = p.alpha1 * p.beta2;
        std::ostringstream d;
        if (at_beta1 > 0.0 &&
            std::abs(at_beta1 - expect) <= 1e-9 * std::max(1.0, std::abs(expect)) &&
            p.beta1 < lambda1) {
            d << "det(A - beta1*I) = alpha1*beta2 = " << expect << " > 0, so beta1 < lambda1";
        } else {
            d << "FAILED: det(A - beta1*I) check (" << at_beta1 << " vs " << expect << ")";
        }
        rep.checkpoints.push_back(d.str());
    }
    {
        const double sq = std::sqrt(p.alpha2);
        const double at_sq = -cp.eval(sq);
        const double expect = p.alpha1 * p.beta2;
        std::ostringstream d;
        if (at_sq > 0.0 && std::abs(at_sq - expect) <= 1e-9 * std::max(1.0, std::abs(expect)) &&
            sq < lambda1) {
            d << "det(A - sqrt(alpha2)*I) = alpha1*beta2 > 0, so sqrt(alpha2) < lambda1";
        } else {
            d << "FAILED: det(A - sqrt(alpha2)*I) check (" << at_sq << " vs " << expect << ")";
        }
        rep.checkpoints.push_back(d.str());
    }

    // nonnegative initial conditions avoid L: beta2*x0 >= 0 while
    // (beta1 - lambda1)*(y0 + lambda1) < 0 for y0 > 0
    rep.checkpoints.push_back(
        p.beta1 < lambda1
            ? "nonnegative quadrant avoids L: beta2*x >= 0 > (beta1-lambda1)*(y+lambda1)"
            : "FAILED: beta1 >= lambda1, L-avoidance argument breaks");

    rep.equilibrium = make_equilibrium(
        p, s, Point{(lambda1 * lambda1 - p.alpha2) / p.beta2, lambda1}, lambda1, 1);
    if (!(rep.equilibrium->point.x > 0.0 && rep.equilibrium->point.y > 0.0)) {
        rep.checkpoints.push_back("FAILED: equilibrium not entrywise positive");
    }
    return rep;
}

}  // namespace ratsys
