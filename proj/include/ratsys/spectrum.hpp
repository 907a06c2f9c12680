#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ratsys/core.hpp"

// Characteristic polynomial of the companion matrix, closed-form cubic
// solving with multiplicity detection, regime tagging, and the coefficients
// a_i(n) of A^n = a0*I + a1*A + a2*A^2.

namespace ratsys {

/// Monic cubic x^3 + c2*x^2 + c1*x + c0. For the system this is
/// (c2, c1, c0) = (-beta1, -alpha2, beta1*alpha2 - beta2*alpha1); the
/// constant term is nonzero exactly when the params are non-degenerate.
struct CharPoly {
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;

    double eval(double x) const { return ((x + c2) * x + c1) * x + c0; }
};

CharPoly char_poly(const Params& p);

struct RealRoot {
    double value = 0.0;
    int multiplicity = 1;
};

/// Complex pair rho*e^{+-i*theta} stored with sin(theta) > 0 (the
/// upper-half-plane representative).
struct ComplexPairRoot {
    double rho = 0.0;
    double theta = 0.0;
};

/// How the root structure falls into the cases of the dynamics analysis.
/// The tag is a function of the Spectrum alone and can be re-derived with
/// classify_regime.
enum class Regime {
    ThreeRealDistinctModuli,          // three simple real roots, |l1|>|l2|>|l3|
    RealDoubleDominant,               // real double root of maximal modulus
    RealDoubleRecessive,              // real double root dominated by a simple one
    RealTriple,                       // one real root of multiplicity 3
    TwoRealSameModulusBetaDominant,   // roots {b, +-s}, |b| > s  (alpha1=0, alpha2>0 family)
    TwoRealSameModulusBetaEqual,      // roots {b (double), -b}
    TwoRealSameModulusBetaRecessive,  // roots {b, +-s}, |b| < s
    ComplexDominantReal,              // real root dominates the pair, |l| > rho
    ComplexEqualModulus,              // |l| = rho
    ComplexRecessiveReal,             // |l| < rho
};

const char* regime_name(Regime r);

/// Roots of the characteristic polynomial with multiplicities. real_roots is
/// sorted by modulus descending (ties: positive value first); all stored
/// multiplicities plus two per complex pair sum to 3.
struct Spectrum {
    std::vector<RealRoot> real_roots;
    std::optional<ComplexPairRoot> complex_pair;
    double spectral_radius = 0.0;
    Regime regime = Regime::ThreeRealDistinctModuli;
    std::vector<std::string> diagnostics;

    bool has_complex_pair() const { return complex_pair.has_value(); }
    /// The real root of largest modulus (spectrum always has one real root).
    double dominant_real() const { return real_roots.front().value; }
};

inline constexpr double kDefaultClusterTol = 1e-8;

/// Closed-form cubic solution: trigonometric branch for three real roots,
/// Cardano for one real root plus a complex pair. Roots closer than
/// cluster_tol * max(1, spectral radius) are merged with summed
/// multiplicity, so exact parameter relations (beta1^2 = alpha2 with
/// alpha1 = 0, triple contact, ...) are detected while generic nearby
/// simple roots are kept apart.
Spectrum roots(const CharPoly& cp, double cluster_tol = kDefaultClusterTol);

/// Re-derives the regime tag from the root structure.
Regime classify_regime(const Spectrum& s, double cluster_tol = kDefaultClusterTol);

/// Coefficients of x^n mod p(x): A^n = a0*I + a1*A + a2*A^2 by
/// Cayley-Hamilton.
struct PowerCoeffs {
    std::size_t n = 0;
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
};

/// Computes x^n mod p(x) by repeated multiply-by-x-and-reduce on the
/// coefficient triple.
PowerCoeffs power_coeffs(const CharPoly& cp, std::size_t n);

}  // namespace ratsys
