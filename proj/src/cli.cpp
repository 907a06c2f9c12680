#include "ratsys/cli.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <ostream>
#include <sstream>

namespace ratsys::cli {

using nlohmann::ordered_json;

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

std::string format_fixed(double v, int decimals) {
    if (!std::isfinite(v)) return "0";
    if (v == 0.0) v = 0.0;
    char buf[48];
    auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    return std::string(buf, r.ptr);
}

namespace {

void dump_value(const ordered_json& j, std::ostream& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * depth), ' ');
    const std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    const char* sp = indent > 0 ? " " : "";

    switch (j.type()) {
        case nlohmann::detail::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << '{' << nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out << ',' << nl;
                first = false;
                if (indent > 0) out << pad_in;
                out << ordered_json(it.key()).dump() << ':' << sp;
                dump_value(it.value(), out, indent, depth + 1);
            }
            out << nl;
            if (indent > 0) out << pad;
            out << '}';
            return;
        }
        case nlohmann::detail::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            out << '[' << nl;
            bool first = true;
            for (const auto& v : j) {
                if (!first) out << ',' << nl;
                first = false;
                if (indent > 0) out << pad_in;
                dump_value(v, out, indent, depth + 1);
            }
            out << nl;
            if (indent > 0) out << pad;
            out << ']';
            return;
        }
        case nlohmann::detail::value_t::number_float:
            out << format_double(j.get<double>());
            return;
        default:
            out << j.dump();
            return;
    }
}

}  // namespace

void dump_json(const ordered_json& j, std::ostream& out, int indent) {
    dump_value(j, out, indent, 0);
    out << '\n';
}

std::string dump_json(const ordered_json& j) {
    std::ostringstream ss;
    dump_json(j, ss);
    return ss.str();
}

void emit_error(std::ostream& err, const std::string& message) {
    const bool color = (&err == &std::cerr) && isatty(2) && std::getenv("NO_COLOR") == nullptr;
    if (color) {
        err << "\033[31merror:\033[0m " << message << '\n';
    } else {
        err << "error: " << message << '\n';
    }
}

ClassifyOptions RunConfig::classify_options() const {
    ClassifyOptions o;
    o.forbidden_horizon = horizon_given ? horizon : kDefaultForbiddenHorizon;
    o.membership_tol = membership_tol;
    o.cluster_tol = cluster_tol;
    o.divide_tol = divide_tol;
    o.period_tol = period_tol;
    o.budget = horizon;
    return o;
}

namespace {

const char* format_name(Format f) {
    switch (f) {
        case Format::Json: return "json";
        case Format::Csv: return "csv";
        case Format::Svg: return "svg";
    }
    return "json";
}

ordered_json json_point(Point z) { return ordered_json::array({z.x, z.y}); }

ordered_json json_config(const RunConfig& cfg) {
    ordered_json c;
    c["params"] = {{"alpha1", cfg.params[0]},
                   {"beta1", cfg.params[1]},
                   {"alpha2", cfg.params[2]},
                   {"beta2", cfg.params[3]}};
    c["initial"] = cfg.initial ? ordered_json(json_point(*cfg.initial)) : ordered_json(nullptr);
    c["horizon"] = cfg.horizon;
    c["tolerances"] = {{"divide", cfg.divide_tol},
                       {"cluster", cfg.cluster_tol},
                       {"membership", cfg.membership_tol},
                       {"period", cfg.period_tol}};
    c["format"] = format_name(cfg.format);
    c["seed"] = cfg.seed;
    return c;
}

ordered_json json_spectrum(const CharPoly& cp, const Spectrum& s) {
    ordered_json j;
    j["char_poly"] = {{"c2", cp.c2}, {"c1", cp.c1}, {"c0", cp.c0}};
    ordered_json rr = ordered_json::array();
    for (const auto& r : s.real_roots) {
        rr.push_back({{"value", r.value}, {"multiplicity", r.multiplicity}});
    }
    j["real_roots"] = rr;
    j["complex_pair"] = s.complex_pair
                            ? ordered_json{{"rho", s.complex_pair->rho},
                                           {"theta", s.complex_pair->theta}}
                            : ordered_json(nullptr);
    j["spectral_radius"] = s.spectral_radius;
    j["regime"] = regime_name(s.regime);
    return j;
}

ordered_json json_equilibrium(const Equilibrium& e) {
    return ordered_json{{"x", e.point.x},
                        {"y", e.point.y},
                        {"lambda", e.lambda},
                        {"multiplicity", e.multiplicity},
                        {"stability", stability_name(e.stability.kind)},
                        {"jacobian_moduli",
                         ordered_json::array(
                             {e.stability.jac_modulus_1, e.stability.jac_modulus_2})}};
}

ordered_json json_line(double a, double b, double c) {
    return ordered_json{{"a", a}, {"b", b}, {"c", c}};
}

ordered_json json_behavior(const Behavior& b) {
    ordered_json j;
    j["kind"] = behavior_name(b.kind);
    j["equilibrium"] =
        b.equilibrium ? json_equilibrium(*b.equilibrium) : ordered_json(nullptr);
    if (!b.cycle.empty()) {
        ordered_json cyc = ordered_json::array();
        for (const Point& z : b.cycle) cyc.push_back(json_point(z));
        j["cycle"] = cyc;
    } else {
        j["cycle"] = nullptr;
    }
    j["period"] = b.kind == BehaviorKind::Periodic ? ordered_json(b.period) : ordered_json(nullptr);
    if (b.line) {
        ordered_json l = json_line(b.line->a, b.line->b, b.line->c);
        l["parallel_c"] = b.line->parallel_c;
        l["lambda"] = b.line->lambda;
        j["line"] = l;
    } else {
        j["line"] = nullptr;
    }
    if (b.conic) {
        j["conic"] = {{"mxx", b.conic->mxx}, {"mxy", b.conic->mxy}, {"mxc", b.conic->mxc},
                      {"myx", b.conic->myx}, {"myy", b.conic->myy}, {"myc", b.conic->myc},
                      {"eccentricity", b.conic->eccentricity},
                      {"directrix_x", b.conic->rho_lambda},
                      {"P", b.conic->P}};
    } else {
        j["conic"] = nullptr;
    }
    j["forbidden_witness"] = b.kind == BehaviorKind::StartsForbidden
                                 ? ordered_json(b.forbidden_witness)
                                 : ordered_json(nullptr);
    return j;
}

bool nonneg_applicable(const Params& p) {
    return p.alpha1 >= 0.0 && p.beta1 >= 0.0 && p.alpha2 >= 0.0 && p.beta2 >= 0.0;
}

}  // namespace

ordered_json build_report(const RunConfig& cfg) {
    const Params p =
        validate_params(cfg.params[0], cfg.params[1], cfg.params[2], cfg.params[3]);
    const ClassifyOptions opts = cfg.classify_options();

    ordered_json rep;
    rep["config"] = json_config(cfg);

    std::vector<std::string> diagnostics;

    const CharPoly cp = char_poly(p);
    const Spectrum s = roots(cp, cfg.cluster_tol);
    diagnostics.insert(diagnostics.end(), s.diagnostics.begin(), s.diagnostics.end());
    rep["spectrum"] = json_spectrum(cp, s);

    const EquilibriaResult eq = equilibria(p, s);
    ordered_json eqj = ordered_json::array();
    for (const auto& e : eq.isolated) eqj.push_back(json_equilibrium(e));
    rep["equilibria"] = eqj;
    rep["equilibrium_line_y"] =
        eq.line_y ? ordered_json(*eq.line_y) : ordered_json(nullptr);

    const auto p2 = period2_criterion(p);
    ordered_json p2j;
    p2j["exists"] = p2.has_value();
    p2j["cycle"] = p2 ? ordered_json::array({json_point((*p2)[0]), json_point((*p2)[1])})
                      : ordered_json(nullptr);
    rep["period2"] = p2j;

    std::string verdict = "none";
    if (cfg.initial) {
        const Behavior b = classify_behavior(p, *cfg.initial, opts);
        diagnostics.insert(diagnostics.end(), b.diagnostics.begin(), b.diagnostics.end());
        rep["behavior"] = json_behavior(b);
        verdict = behavior_name(b.kind);
    } else {
        rep["behavior"] = nullptr;
    }

    if (nonneg_applicable(p)) {
        const NonnegReport nn = classify_nonneg(p);
        ordered_json nj;
        std::string kind = nonneg_kind_name(nn.kind);
        if (nn.kind == NonnegKind::BoundedWith2CycleLine) kind += std::string("_") + nn.subcase;
        nj["kind"] = kind;
        nj["equilibrium"] =
            nn.equilibrium ? json_equilibrium(*nn.equilibrium) : ordered_json(nullptr);
        nj["checkpoints"] = nn.checkpoints;
        rep["nonneg"] = nj;
        if (!cfg.initial) verdict = kind;
    } else {
        rep["nonneg"] = nullptr;
    }
    rep["verdict"] = verdict;

    const ForbiddenSet fs = forbidden_lines(p, opts.forbidden_horizon);
    diagnostics.insert(diagnostics.end(), fs.diagnostics.begin(), fs.diagnostics.end());
    ordered_json fj = ordered_json::array();
    for (const Line& l : fs.lines) {
        ordered_json lj;
        lj["n"] = l.witness_n;
        lj["a"] = l.a;
        lj["b"] = l.b;
        lj["c"] = l.c;
        fj.push_back(lj);
    }
    rep["forbidden_lines"] = fj;
    rep["diagnostics"] = diagnostics;
    return rep;
}

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

int run_report_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const ordered_json rep = build_report(cfg);
        if (cfg.format == Format::Csv) {
            out << "alpha1,beta1,alpha2,beta2,regime,n_equilibria,period2_exists,verdict\n";
            out << format_double(cfg.params[0]) << ',' << format_double(cfg.params[1]) << ','
                << format_double(cfg.params[2]) << ',' << format_double(cfg.params[3]) << ','
                << rep["spectrum"]["regime"].get<std::string>() << ','
                << rep["equilibria"].size() << ','
                << (rep["period2"]["exists"].get<bool>() ? 1 : 0) << ','
                << rep["verdict"].get<std::string>() << '\n';
        } else if (cfg.format == Format::Svg) {
            emit_error(err, "classify does not produce svg; use the portrait command");
            return kExitUsage;
        } else {
            dump_json(rep, out, 2);
        }
        return kExitOk;
    } catch (const degenerate_riccati_error& e) {
        emit_error(err, e.what());
        return kExitDegenerate;
    } catch (const std::invalid_argument& e) {
        emit_error(err, e.what());
        return kExitUsage;
    }
}

}  // namespace

int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return run_report_command(cfg, out, err);
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.initial) {
        emit_error(err, "simulate requires --initial x,y");
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

    const ClassifyOptions opts = cfg.classify_options();
    const Orbit orbit = iterate(p, *cfg.initial, cfg.horizon, cfg.divide_tol);
    if (!orbit.complete() && orbit.stop_index <= opts.forbidden_horizon) {
        // forbidden start only when the geometric witness agrees with the
        // death step; orbits merely collapsing onto y = 0 keep their rows
        const auto w =
            is_forbidden(p, *cfg.initial, opts.forbidden_horizon, cfg.membership_tol);
        const std::size_t gap =
            w ? (orbit.stop_index >= *w ? orbit.stop_index - *w : *w - orbit.stop_index)
              : std::size_t{100};
        if (w && gap <= 2) {
            std::ostringstream msg;
            msg << "initial condition lies on the forbidden set (witness n = "
                << orbit.stop_index << ")";
            emit_error(err, msg.str());
            return kExitForbiddenInitial;
        }
    }
    const bool closed_zero = (p.beta2 == 0.0);

    struct Row {
        std::size_t n;
        Point it;
        Point cf;
        double disc;
    };
    std::vector<Row> rows;
    rows.reserve(orbit.points.size());
    for (std::size_t n = 0; n < orbit.points.size(); ++n) {
        Row r;
        r.n = n;
        r.it = orbit.points[n];
        try {
            r.cf = closed_zero ? solve_beta2_zero(p, *cfg.initial, n)
                               : solve_beta2_nonzero(p, *cfg.initial, n);
        } catch (const std::runtime_error&) {
            r.cf = Point{std::nan(""), std::nan("")};
        }
        const double dx = std::abs(r.it.x - r.cf.x) / std::max(1.0, std::abs(r.it.x));
        const double dy = std::abs(r.it.y - r.cf.y) / std::max(1.0, std::abs(r.it.y));
        r.disc = std::max(dx, dy);
        rows.push_back(r);
    }

    const std::string status = orbit.complete() ? "complete" : "hit_forbidden";
    if (cfg.format == Format::Json) {
        ordered_json j;
        j["config"] = json_config(cfg);
        ordered_json rj = ordered_json::array();
        for (const Row& r : rows) {
            rj.push_back({{"n", r.n},
                          {"x", r.it.x},
                          {"y", r.it.y},
                          {"x_closed", r.cf.x},
                          {"y_closed", r.cf.y},
                          {"discrepancy", r.disc}});
        }
        j["rows"] = rj;
        j["status"] = status;
        j["stop_index"] = orbit.stop_index;
        dump_json(j, out, 2);
    } else {
        out << "n,x,y,x_closed,y_closed,discrepancy,status\n";
        for (const Row& r : rows) {
            out << r.n << ',' << format_double(r.it.x) << ',' << format_double(r.it.y) << ','
                << format_double(r.cf.x) << ',' << format_double(r.cf.y) << ','
                << format_double(r.disc) << ",\n";
        }
        out << orbit.stop_index << ",,,,,," << status << '\n';
    }
    return kExitOk;
}

int cmd_forbidden(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
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
    const std::size_t horizon = cfg.horizon_given ? cfg.horizon : kDefaultForbiddenHorizon;
    const ForbiddenSet fs = forbidden_lines(p, horizon);

    if (cfg.format == Format::Json) {
        ordered_json j;
        j["config"] = json_config(cfg);
        j["horizon"] = horizon;
        ordered_json lines = ordered_json::array();
        for (const Line& l : fs.lines) {
            lines.push_back({{"n", l.witness_n}, {"a", l.a}, {"b", l.b}, {"c", l.c}});
        }
        j["lines"] = lines;
        j["diagnostics"] = fs.diagnostics;
        dump_json(j, out, 2);
    } else {
        out << "n,a,b,c\n";
        for (const Line& l : fs.lines) {
            out << l.witness_n << ',' << format_double(l.a) << ',' << format_double(l.b) << ','
                << format_double(l.c) << '\n';
        }
    }
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::array<std::size_t, 4> counts;
    std::size_t total = 1;
    for (int i = 0; i < 4; ++i) {
        const AxisRange& ax = cfg.axes[i];
        if (ax.ranged && !(ax.hi >= ax.lo)) {
            emit_error(err, "malformed axis range: hi < lo");
            return kExitUsage;
        }
        counts[i] = ax.ranged ? cfg.samples : 1;
        if (counts[i] == 0) {
            emit_error(err, "samples per axis must be >= 1");
            return kExitUsage;
        }
        total *= counts[i];
    }
    if (total > 1000000) {
        emit_error(err, "grid too large (> 10^6 cells)");
        return kExitUsage;
    }

    auto axis_value = [&](int i, std::size_t k) {
        const AxisRange& ax = cfg.axes[i];
        if (!ax.ranged || cfg.samples == 1) return ax.lo;
        return ax.lo + (ax.hi - ax.lo) * static_cast<double>(k) /
                           static_cast<double>(cfg.samples - 1);
    };

    out << "alpha1,beta1,alpha2,beta2,degenerate,regime,n_equilibria,"
           "has_equilibrium_line,period2_exists,dominant_stability\n";
    for (std::size_t i0 = 0; i0 < counts[0]; ++i0) {
        for (std::size_t i1 = 0; i1 < counts[1]; ++i1) {
            for (std::size_t i2 = 0; i2 < counts[2]; ++i2) {
                for (std::size_t i3 = 0; i3 < counts[3]; ++i3) {
                    const double a1 = axis_value(0, i0);
                    const double b1 = axis_value(1, i1);
                    const double a2 = axis_value(2, i2);
                    const double b2 = axis_value(3, i3);
                    out << format_double(a1) << ',' << format_double(b1) << ','
                        << format_double(a2) << ',' << format_double(b2) << ',';
                    try {
                        const Params p = validate_params(a1, b1, a2, b2);
                        const Spectrum s = roots(char_poly(p), cfg.cluster_tol);
                        const EquilibriaResult eq = equilibria(p, s);
                        const bool p2 = period2_criterion(p).has_value();
                        std::string dom = "none";
                        if (!eq.isolated.empty()) {
                            // equilibrium associated to the eigenvalue of
                            // largest modulus
                            const Equilibrium* best = &eq.isolated.front();
                            for (const auto& e : eq.isolated) {
                                if (std::abs(e.lambda) > std::abs(best->lambda)) best = &e;
                            }
                            dom = stability_name(best->stability.kind);
                        }
                        out << "0," << csv_quote(regime_name(s.regime)) << ','
                            << eq.isolated.size() << ',' << (eq.line_y ? 1 : 0) << ','
                            << (p2 ? 1 : 0) << ',' << csv_quote(dom) << '\n';
                    } catch (const degenerate_riccati_error&) {
                        out << "1,degenerate,0,0,0,none\n";
                    }
                }
            }
        }
    }
    return kExitOk;
}

}  // namespace ratsys::cli
