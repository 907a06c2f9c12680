#include "ratsys/forbidden.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace ratsys {

namespace {

// canonical textual key for dedup of normalized lines
std::string line_key(double a, double b, double c) {
    char buf[96];
    char* p = buf;
    for (double v : {a, b, c}) {
        auto r = std::to_chars(p, buf + sizeof(buf) - 1, v, std::chars_format::general, 12);
        p = r.ptr;
        *p++ = '|';
    }
    return std::string(buf, p);
}

}  // namespace

double Line::distance(Point z) const {
    return std::abs(residual(z)) / std::hypot(a, b);
}

Point Line::point_at(double t) const {
    // foot of the origin perpendicular plus t along the direction
    const double n2 = a * a + b * b;
    const double fx = -c * a / n2;
    const double fy = -c * b / n2;
    const double n = std::sqrt(n2);
    return Point{fx - t * b / n, fy + t * a / n};
}

ForbiddenSet forbidden_lines(const Params& p, std::size_t horizon) {
    ForbiddenSet out;
    const CharPoly cp = char_poly(p);

    std::unordered_map<std::string, std::size_t> seen;  // key -> index in out.lines

    // Running (a0, a1, a2) of x^n mod p(x). The line only depends on the
    // triple up to scale, so it may be rescaled freely to dodge overflow on
    // long horizons with a large spectral radius.
    double a0 = 1.0, a1 = 0.0, a2 = 0.0;
    for (std::size_t n = 1; n <= horizon; ++n) {
        const double t2 = a2;
        a2 = a1 - cp.c2 * t2;
        a1 = a0 - cp.c1 * t2;
        a0 = -cp.c0 * t2;
        const double mag = std::max({std::abs(a0), std::abs(a1), std::abs(a2)});
        if (mag > 1e100) {
            a0 /= mag;
            a1 /= mag;
            a2 /= mag;
        }

        double la = a2 * p.beta2;
        double lb = a1;
        double lc = a2 * p.alpha2 + a0;

        const double nm = std::max(std::abs(la), std::abs(lb));
        if (nm == 0.0) {
            std::ostringstream d;
            if (lc == 0.0) {
                d << "whole plane at step " << n
                  << " (a=b=c=0; impossible for validated parameters)";
            } else {
                d << "step " << n << " imposes no constraint (a=b=0, c=" << lc
                  << "); skipped";
            }
            out.diagnostics.push_back(d.str());
            continue;
        }
        la /= nm;
        lb /= nm;
        lc /= nm;
        if (la < 0.0 || (la == 0.0 && lb < 0.0)) {
            la = -la;
            lb = -lb;
            lc = -lc;
        }
        // -0.0 would split dedup keys
        if (la == 0.0) la = 0.0;
        if (lb == 0.0) lb = 0.0;
        if (lc == 0.0) lc = 0.0;

        const std::string key = line_key(la, lb, lc);
        if (seen.find(key) != seen.end()) continue;  // keep smallest witness
        seen.emplace(key, out.lines.size());
        out.lines.push_back(Line{la, lb, lc, n});
    }
    return out;
}

std::optional<std::size_t> is_forbidden(const Params& p, Point z0, std::size_t horizon,
                                        double tol) {
    const ForbiddenSet fs = forbidden_lines(p, horizon);
    std::optional<std::size_t> best;
    for (const Line& l : fs.lines) {
        if (l.distance(z0) <= tol) {
            if (!best || l.witness_n < *best) best = l.witness_n;
        }
    }
    return best;
}

}  // namespace ratsys
