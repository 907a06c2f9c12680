#include "ratsys/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace ratsys {

namespace {

double poly_derivative(const CharPoly& cp, double x) {
    return (3.0 * x + 2.0 * cp.c2) * x + cp.c1;
}

// One or two guarded Newton corrections; keeps the incoming value when the
// derivative is too flat (multiple root) or the residual does not improve.
double polish_real(const CharPoly& cp, double x) {
    for (int it = 0; it < 2; ++it) {
        const double f = cp.eval(x);
        const double df = poly_derivative(cp, x);
        const double scale = 1.0 + x * x;
        if (std::abs(df) <= 1e-8 * scale) break;
        const double xn = x - f / df;
        if (!std::isfinite(xn) || std::abs(cp.eval(xn)) >= std::abs(f)) break;
        x = xn;
    }
    return x;
}

std::complex<double> polish_complex(const CharPoly& cp, std::complex<double> z) {
    for (int it = 0; it < 2; ++it) {
        const std::complex<double> f = ((z + cp.c2) * z + cp.c1) * z + cp.c0;
        const std::complex<double> df = (3.0 * z + 2.0 * cp.c2) * z + cp.c1;
        if (std::abs(df) <= 1e-8 * (1.0 + std::norm(z))) break;
        const std::complex<double> zn = z - f / df;
        const std::complex<double> fn = ((zn + cp.c2) * zn + cp.c1) * zn + cp.c0;
        if (!std::isfinite(zn.real()) || !std::isfinite(zn.imag()) ||
            std::abs(fn) >= std::abs(f)) {
            break;
        }
        z = zn;
    }
    return z;
}

// Zero of p' closest to x0; the right refinement for a double root, where
// plain Newton on p stalls at O(sqrt(eps)).
double refine_double_root(const CharPoly& cp, double x0) {
    const double disc = cp.c2 * cp.c2 - 3.0 * cp.c1;
    if (disc < 0.0) return x0;
    const double sq = std::sqrt(disc);
    double r1, r2;
    if (cp.c2 >= 0.0) {
        r1 = (-cp.c2 - sq) / 3.0;
    } else {
        r1 = (-cp.c2 + sq) / 3.0;
    }
    // companion root through the product c1/3 avoids cancellation
    r2 = (r1 != 0.0) ? (cp.c1 / 3.0) / r1 : (-cp.c2 + sq) / 3.0;
    return (std::abs(r1 - x0) <= std::abs(r2 - x0)) ? r1 : r2;
}

struct RawRoots {
    std::vector<double> real;                  // with repetition for multiple roots
    std::optional<std::complex<double>> pair;  // upper-half representative
    bool near_boundary = false;                // multiplicity decided inside the fuzz band
};

// Multiplicity detection happens on the depressed-cubic invariants, not on
// root distances: a triple root reconstructed from its coefficients is only
// accurate to eps^(1/3) and a double root to sqrt(eps), while the exact
// parameter relations cancel p, q and the discriminant down to machine
// epsilon.
RawRoots solve_cubic(const CharPoly& cp) {
    RawRoots out;
    // depressed form t^3 + p t + q with x = t - c2/3
    const double shift = cp.c2 / 3.0;
    const double p = cp.c1 - cp.c2 * cp.c2 / 3.0;
    const double q = cp.c2 * (2.0 * cp.c2 * cp.c2 / 27.0 - cp.c1 / 3.0) + cp.c0;

    const double rscale = std::max({1.0, std::abs(cp.c2), std::sqrt(std::abs(cp.c1)),
                                    std::cbrt(std::abs(cp.c0))});

    // triple root: p and q vanish at coefficient precision
    if (std::abs(p) <= 1e-12 * rscale * rscale &&
        std::abs(q) <= 1e-12 * rscale * rscale * rscale) {
        out.real.assign(3, -shift);
        out.near_boundary = std::abs(p) > 1e-15 * rscale * rscale ||
                            std::abs(q) > 1e-15 * rscale * rscale * rscale;
        return out;
    }

    const double disc = q * q / 4.0 + p * p * p / 27.0;
    const double disc_scale = std::max(q * q / 4.0, std::abs(p * p * p) / 27.0);

    // vanishing discriminant: a double root -3q/(2p) and a simple root 3q/p
    if (std::abs(disc) <= 1e-10 * disc_scale) {
        const double td = -1.5 * q / p;
        const double ts = 3.0 * q / p;
        const double xd = refine_double_root(cp, td - shift);
        out.real = {xd, xd, polish_real(cp, ts - shift)};
        out.near_boundary = std::abs(disc) > 1e-14 * disc_scale;
        return out;
    }

    if (disc < 0.0) {
        // three distinct real roots (trigonometric branch)
        const double Q = -p / 3.0;
        const double R = -q / 2.0;
        const double sq = std::sqrt(Q);
        double ratio = (sq > 0.0) ? R / (Q * sq) : 0.0;
        ratio = std::clamp(ratio, -1.0, 1.0);
        const double phi = std::acos(ratio);
        for (int k = 0; k < 3; ++k) {
            const double t = 2.0 * sq * std::cos((phi - 2.0 * std::numbers::pi * k) / 3.0);
            out.real.push_back(polish_real(cp, t - shift));
        }
    } else {
        // one real root (Cardano), complex pair
        const double R = -q / 2.0;
        const double sd = std::sqrt(disc);
        const double u3 = (q <= 0.0) ? R + sd : R - sd;
        const double u = std::cbrt(u3);
        const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
        out.real.push_back(polish_real(cp, (u + v) - shift));
        std::complex<double> z(-(u + v) / 2.0 - shift,
                               std::numbers::sqrt3 / 2.0 * std::abs(u - v));
        out.pair = polish_complex(cp, z);
    }
    return out;
}

bool modulus_order(const RealRoot& a, const RealRoot& b) {
    const double ma = std::abs(a.value);
    const double mb = std::abs(b.value);
    if (ma != mb) return ma > mb;
    return a.value > b.value;
}

}  // namespace

CharPoly char_poly(const Params& p) {
    return CharPoly{-p.beta1, -p.alpha2, p.beta1 * p.alpha2 - p.beta2 * p.alpha1};
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::ThreeRealDistinctModuli: return "distinct_moduli_simple";
        case Regime::RealDoubleDominant: return "distinct_moduli_double_dominant";
        case Regime::RealDoubleRecessive: return "distinct_moduli_double_recessive";
        case Regime::RealTriple: return "distinct_moduli_triple";
        case Regime::TwoRealSameModulusBetaDominant: return "two_real_same_modulus_beta_dominant";
        case Regime::TwoRealSameModulusBetaEqual: return "two_real_same_modulus_beta_equal";
        case Regime::TwoRealSameModulusBetaRecessive:
            return "two_real_same_modulus_beta_recessive";
        case Regime::ComplexDominantReal: return "complex_dominant";
        case Regime::ComplexEqualModulus: return "complex_equal";
        case Regime::ComplexRecessiveReal: return "complex_recessive";
    }
    return "unknown";
}

Spectrum roots(const CharPoly& cp, double cluster_tol) {
    Spectrum s;
    RawRoots raw = solve_cubic(cp);
    if (raw.near_boundary) {
        s.diagnostics.push_back(
            "root multiplicity decided inside the detection band; a nearby system with "
            "simple roots classifies differently");
    }

    double radius = 0.0;
    for (double r : raw.real) radius = std::max(radius, std::abs(r));
    if (raw.pair) radius = std::max(radius, std::abs(*raw.pair));
    const double tol = cluster_tol * std::max(1.0, radius);

    // collapse a complex pair with negligible imaginary part into a real
    // double root
    if (raw.pair && std::abs(raw.pair->imag()) <= tol) {
        std::ostringstream d;
        d << "complex pair with |Im| = " << std::abs(raw.pair->imag())
          << " collapsed to a real double root";
        s.diagnostics.push_back(d.str());
        raw.real.push_back(raw.pair->real());
        raw.real.push_back(raw.pair->real());
        raw.pair.reset();
    }

    std::sort(raw.real.begin(), raw.real.end());
    for (std::size_t i = 0; i < raw.real.size();) {
        std::size_t j = i + 1;
        double sum = raw.real[i];
        while (j < raw.real.size() && raw.real[j] - raw.real[j - 1] <= tol) {
            sum += raw.real[j];
            ++j;
        }
        RealRoot rr{sum / static_cast<double>(j - i), static_cast<int>(j - i)};
        if (rr.multiplicity == 2) {
            rr.value = refine_double_root(cp, rr.value);
        } else if (rr.multiplicity == 3) {
            rr.value = -cp.c2 / 3.0;  // zero of p''
        } else {
            // near-miss diagnostic: distinct roots that almost clustered
            if (j < raw.real.size() && raw.real[j] - raw.real[j - 1] <= 8.0 * tol) {
                std::ostringstream d;
                d << "real roots " << raw.real[j - 1] << " and " << raw.real[j]
                  << " are close but kept distinct (cluster_tol boundary)";
                s.diagnostics.push_back(d.str());
            }
        }
        s.real_roots.push_back(rr);
        i = j;
    }

    if (raw.pair) {
        const double rho = std::abs(*raw.pair);
        double theta = std::atan2(std::abs(raw.pair->imag()), raw.pair->real());
        s.complex_pair = ComplexPairRoot{rho, theta};
    }

    std::sort(s.real_roots.begin(), s.real_roots.end(), modulus_order);

    s.spectral_radius = 0.0;
    for (const auto& r : s.real_roots) s.spectral_radius = std::max(s.spectral_radius, std::abs(r.value));
    if (s.complex_pair) s.spectral_radius = std::max(s.spectral_radius, s.complex_pair->rho);

    s.regime = classify_regime(s, cluster_tol);
    return s;
}

Regime classify_regime(const Spectrum& s, double cluster_tol) {
    const double tol = cluster_tol * std::max(1.0, s.spectral_radius);

    if (s.complex_pair) {
        const double lm = std::abs(s.real_roots.front().value);
        const double rho = s.complex_pair->rho;
        if (std::abs(lm - rho) <= tol) return Regime::ComplexEqualModulus;
        return lm > rho ? Regime::ComplexDominantReal : Regime::ComplexRecessiveReal;
    }

    // all real: look for two distinct roots sharing a modulus (necessarily a
    // +-pair: same sign plus same modulus would have clustered)
    const auto& rr = s.real_roots;
    for (std::size_t i = 0; i < rr.size(); ++i) {
        for (std::size_t j = i + 1; j < rr.size(); ++j) {
            if (std::abs(std::abs(rr[i].value) - std::abs(rr[j].value)) > tol) continue;
            if (rr.size() == 2) return Regime::TwoRealSameModulusBetaEqual;
            // third root is beta1; compare against the pair modulus
            const std::size_t b = 3 - i - j;
            const double beta_mod = std::abs(rr[b].value);
            const double pair_mod = std::abs(rr[i].value);
            if (std::abs(beta_mod - pair_mod) <= tol) return Regime::TwoRealSameModulusBetaEqual;
            return beta_mod > pair_mod ? Regime::TwoRealSameModulusBetaDominant
                                       : Regime::TwoRealSameModulusBetaRecessive;
        }
    }

    if (rr.size() == 1) return Regime::RealTriple;
    if (rr.size() == 2) {
        const bool double_first = rr[0].multiplicity == 2;
        // front has the larger modulus by the sort order
        return double_first ? Regime::RealDoubleDominant : Regime::RealDoubleRecessive;
    }
    return Regime::ThreeRealDistinctModuli;
}

PowerCoeffs power_coeffs(const CharPoly& cp, std::size_t n) {
    double a0 = 1.0, a1 = 0.0, a2 = 0.0;  // x^0
    for (std::size_t k = 0; k < n; ++k) {
        // multiply by x, reduce once: x^3 = -c2 x^2 - c1 x - c0
        const double t2 = a2;
        a2 = a1 - cp.c2 * t2;
        a1 = a0 - cp.c1 * t2;
        a0 = -cp.c0 * t2;
    }
    return PowerCoeffs{n, a0, a1, a2};
}

}  // namespace ratsys
