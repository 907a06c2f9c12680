#include <cmath>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "ratsys/cli.hpp"

// Static SVG phase portraits: sampled orbits as polylines, equilibria as
// markers, the exceptional line L and its parallel through the fixed point
// dashed, and the invariant conic as a path when the regime carries one.

namespace ratsys::cli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;

struct Mapper {
    Viewport vp;

    Point to_svg(Point w) const {
        return Point{(w.x - vp.xmin) / vp.width() * kWidth,
                     kHeight - (w.y - vp.ymin) / vp.height() * kHeight};
    }
};

double next_uniform(std::mt19937_64& rng) {
    // top 53 bits; identical across platforms, unlike the std distributions
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Liang-Barsky segment clip against the viewport
std::optional<std::pair<Point, Point>> clip_segment(const Viewport& vp, Point a, Point b) {
    double t0 = 0.0, t1 = 1.0;
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - vp.xmin, vp.xmax - a.x, a.y - vp.ymin, vp.ymax - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return std::nullopt;
            continue;
        }
        const double r = q[i] / p[i];
        if (p[i] < 0.0) {
            if (r > t1) return std::nullopt;
            if (r > t0) t0 = r;
        } else {
            if (r < t0) return std::nullopt;
            if (r < t1) t1 = r;
        }
    }
    return std::make_pair(Point{a.x + t0 * dx, a.y + t0 * dy},
                          Point{a.x + t1 * dx, a.y + t1 * dy});
}

std::string svg_coord(double v) { return format_fixed(v, 6); }

// polyline as a path, restarting the pen whenever a segment leaves the
// viewport
void emit_path(std::ostream& out, const Mapper& map, const std::vector<Point>& pts,
               const std::string& cls, const std::string& style) {
    std::ostringstream d;
    bool pen_down = false;
    Point last_svg{};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(std::isfinite(pts[i].x) && std::isfinite(pts[i].y) &&
              std::isfinite(pts[i + 1].x) && std::isfinite(pts[i + 1].y))) {
            pen_down = false;
            continue;
        }
        const auto seg = clip_segment(map.vp, pts[i], pts[i + 1]);
        if (!seg) {
            pen_down = false;
            continue;
        }
        const Point s0 = map.to_svg(seg->first);
        const Point s1 = map.to_svg(seg->second);
        const bool contiguous =
            pen_down && std::abs(s0.x - last_svg.x) < 1e-6 && std::abs(s0.y - last_svg.y) < 1e-6;
        if (!contiguous) {
            d << "M " << svg_coord(s0.x) << ' ' << svg_coord(s0.y) << ' ';
        }
        d << "L " << svg_coord(s1.x) << ' ' << svg_coord(s1.y) << ' ';
        pen_down = true;
        last_svg = s1;
    }
    const std::string data = d.str();
    if (data.empty()) return;
    out << "  <path class=\"" << cls << "\" d=\"" << data << "\" " << style << "/>\n";
}

// the visible chord of an infinite line a*x + b*y + c = 0
void emit_infinite_line(std::ostream& out, const Mapper& map, double a, double b, double c,
                        const std::string& cls, const std::string& style) {
    const Viewport& vp = map.vp;
    std::vector<Point> hits;
    auto push_unique = [&](Point z) {
        for (const Point& h : hits) {
            if (std::abs(h.x - z.x) <= 1e-12 * (1.0 + std::abs(z.x)) &&
                std::abs(h.y - z.y) <= 1e-12 * (1.0 + std::abs(z.y))) {
                return;
            }
        }
        hits.push_back(z);
    };
    if (b != 0.0) {
        for (double x : {vp.xmin, vp.xmax}) {
            const double y = -(a * x + c) / b;
            if (y >= vp.ymin && y <= vp.ymax) push_unique(Point{x, y});
        }
    }
    if (a != 0.0) {
        for (double y : {vp.ymin, vp.ymax}) {
            const double x = -(b * y + c) / a;
            if (x >= vp.xmin && x <= vp.xmax) push_unique(Point{x, y});
        }
    }
    if (hits.size() < 2) return;
    const Point s0 = map.to_svg(hits[0]);
    const Point s1 = map.to_svg(hits[1]);
    out << "  <line class=\"" << cls << "\" x1=\"" << svg_coord(s0.x) << "\" y1=\""
        << svg_coord(s0.y) << "\" x2=\"" << svg_coord(s1.x) << "\" y2=\"" << svg_coord(s1.y)
        << "\" " << style << "/>\n";
}

// focus-directrix sampling of the invariant conic, both solution branches
void emit_conic(std::ostream& out, const Mapper& map, const Conic& k) {
    const double e = k.eccentricity;
    const double d0 = k.rho_lambda;
    for (int branch = 0; branch < 2; ++branch) {
        std::vector<Point> pts;
        pts.reserve(721);
        for (int i = 0; i <= 720; ++i) {
            const double phi = static_cast<double>(i) * (2.0 * 3.14159265358979323846 / 720.0);
            const double ct = std::cos(phi);
            const double den = (branch == 0) ? (1.0 + e * ct) : (e * ct - 1.0);
            double r = (den != 0.0) ? e * d0 / den : std::numeric_limits<double>::infinity();
            bool ok = std::isfinite(r) && r >= 0.0 && r <= 1e9;
            if (ok) {
                const double xb = r * ct;
                const double yb = r * std::sin(phi);
                // keep only genuine solutions of dist(focus) = e*dist(directrix)
                ok = std::abs(std::hypot(xb, yb) - e * std::abs(xb - d0)) <=
                     1e-6 * (1.0 + std::hypot(xb, yb));
                if (ok) {
                    pts.push_back(k.inverse_transform(Point{xb, yb}));
                    continue;
                }
            }
            pts.push_back(Point{std::nan(""), std::nan("")});  // pen up
        }
        emit_path(out, map, pts, "conic",
                  "fill=\"none\" stroke=\"#9467bd\" stroke-width=\"1.2\"");
    }
}

}  // namespace

int cmd_portrait(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.viewport.empty() || !std::isfinite(cfg.viewport.width()) ||
        !std::isfinite(cfg.viewport.height())) {
        emit_error(err, "empty or non-finite viewport");
        return kExitUsage;
    }
    Params p{};
    try {
        p = validate_params(cfg.params[0], cfg.params[1], cfg.params[2], cfg.params[3]);
    } catch (const degenerate_riccati_error& e) {
        emit_error(err, e.what());
        return kExitDegenerate;
    } catch (const std::invalid_argument& e) {
        emit_error(err, e.what());
        return kExitUsage;
    }

    const Mapper map{cfg.viewport};
    const Spectrum s = roots(char_poly(p), cfg.cluster_tol);
    const EquilibriaResult eq = equilibria(p, s);

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\">\n";
    out << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"#ffffff\"/>\n";

    // sampled orbits
    std::mt19937_64 rng(cfg.seed);
    const double escape =
        100.0 * std::max({std::abs(cfg.viewport.xmin), std::abs(cfg.viewport.xmax),
                          std::abs(cfg.viewport.ymin), std::abs(cfg.viewport.ymax), 1.0});
    std::vector<Point> starts;
    for (std::size_t i = 0; i < cfg.n_orbits; ++i) {
        const double x = cfg.viewport.xmin + next_uniform(rng) * cfg.viewport.width();
        const double y = cfg.viewport.ymin + next_uniform(rng) * cfg.viewport.height();
        starts.push_back(Point{x, y});
    }
    if (cfg.initial) starts.insert(starts.begin(), *cfg.initial);

    for (const Point& z0 : starts) {
        std::vector<Point> pts;
        pts.push_back(z0);
        Point z = z0;
        for (std::size_t n = 0; n < cfg.horizon; ++n) {
            try {
                z = step(p, z, cfg.divide_tol);
            } catch (const division_by_zero_error&) {
                break;
            }
            pts.push_back(z);
            if (std::abs(z.x) > escape || std::abs(z.y) > escape) break;
        }
        emit_path(out, map, pts, "orbit",
                  "fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.8\" opacity=\"0.8\"");
    }

    // exceptional line and its parallel through the fixed point
    if (p.beta2 != 0.0 && !s.real_roots.empty()) {
        const LineL L = line_L(p, s.real_roots.front().value);
        emit_infinite_line(out, map, L.a, L.b, L.c, "line-L",
                           "stroke=\"#2ca02c\" stroke-width=\"1.4\" stroke-dasharray=\"8 5\"");
        emit_infinite_line(out, map, L.a, L.b, L.parallel_c, "line-parallel",
                           "stroke=\"#ff7f0e\" stroke-width=\"1.4\" stroke-dasharray=\"3 4\"");
    }

    // invariant conics through the sampled starting points
    if (s.regime == Regime::ComplexEqualModulus) {
        for (const Point& z0 : starts) {
            if (auto k = conic_of(p, s, z0)) emit_conic(out, map, *k);
        }
    }

    // equilibrium markers
    for (const auto& e : eq.isolated) {
        if (e.point.x < cfg.viewport.xmin || e.point.x > cfg.viewport.xmax ||
            e.point.y < cfg.viewport.ymin || e.point.y > cfg.viewport.ymax) {
            continue;
        }
        const Point c = map.to_svg(e.point);
        out << "  <circle class=\"equilibrium\" cx=\"" << svg_coord(c.x) << "\" cy=\""
            << svg_coord(c.y) << "\" r=\"4\" fill=\"#d62728\"/>\n";
    }
    if (eq.line_y && *eq.line_y >= cfg.viewport.ymin && *eq.line_y <= cfg.viewport.ymax) {
        emit_infinite_line(out, map, 0.0, 1.0, -*eq.line_y, "equilibrium-line",
                           "stroke=\"#d62728\" stroke-width=\"1.0\" stroke-dasharray=\"2 3\"");
    }

    out << "</svg>\n";
    return kExitOk;
}

}  // namespace ratsys::cli
