#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ratsys/cli.hpp"

// ratsys <command> --params a1,b1,a2,b2 [options]
//
// Commands: classify, simulate, forbidden, sweep, portrait. A flat
// key=value config file can seed any option; explicit flags win.

namespace {

using ratsys::cli::RunConfig;

struct RawOptions {
    std::string params;
    std::string initial;
    std::string horizon;
    std::string divide_tol;
    std::string cluster_tol;
    std::string membership_tol;
    std::string period_tol;
    std::string format;
    std::string seed;
    std::string config_path;
    // sweep
    std::string axis[4];
    std::string samples;
    // portrait
    std::string viewport;
    std::string orbits;
};

bool parse_doubles(const std::string& s, char sep, std::size_t want,
                   std::vector<double>& out) {
    out.clear();
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) {
                ++pos;
            }
            if (pos != item.size()) return false;
        } catch (...) {
            return false;
        }
    }
    return out.size() == want;
}

bool parse_size(const std::string& s, std::size_t& out) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size() || v < 0) return false;
        out = static_cast<std::size_t>(v);
        return true;
    } catch (...) {
        return false;
    }
}

bool parse_positive(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size() && out > 0.0;
    } catch (...) {
        return false;
    }
}

// flat key=value lines; '#' starts a comment
bool load_config_file(const std::string& path, std::map<std::string, std::string>& kv,
                      std::string& error) {
    std::ifstream in(path);
    if (!in) {
        error = "cannot open config file: " + path;
        return false;
    }
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string t) {
            const auto b = t.find_first_not_of(" \t\r");
            const auto e = t.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return true;
}

struct OptionBinding {
    const char* key;
    std::string* slot;
};

int build_config(CLI::App* sub, RawOptions& raw, RunConfig& cfg, bool params_required,
                 std::ostream& err) {
    using ratsys::cli::emit_error;
    using ratsys::cli::kExitUsage;

    const OptionBinding bindings[] = {
        {"params", &raw.params},       {"initial", &raw.initial},
        {"horizon", &raw.horizon},     {"divide-tol", &raw.divide_tol},
        {"cluster-tol", &raw.cluster_tol}, {"membership-tol", &raw.membership_tol},
        {"period-tol", &raw.period_tol},   {"format", &raw.format},
        {"seed", &raw.seed},           {"alpha1", &raw.axis[0]},
        {"beta1", &raw.axis[1]},       {"alpha2", &raw.axis[2]},
        {"beta2", &raw.axis[3]},       {"samples", &raw.samples},
        {"viewport", &raw.viewport},   {"orbits", &raw.orbits},
    };

    if (!raw.config_path.empty()) {
        std::map<std::string, std::string> kv;
        std::string error;
        if (!load_config_file(raw.config_path, kv, error)) {
            emit_error(err, error);
            return kExitUsage;
        }
        for (const auto& b : bindings) {
            // explicit flags override file values; not every option exists on
            // every subcommand
            const CLI::Option* opt = sub->get_option_no_throw(std::string("--") + b.key);
            if ((opt == nullptr || opt->count() == 0) && kv.count(b.key)) {
                *b.slot = kv[b.key];
            }
        }
    }

    std::vector<double> vals;
    if (!raw.params.empty()) {
        if (!parse_doubles(raw.params, ',', 4, vals)) {
            emit_error(err, "--params expects four comma-separated reals");
            return kExitUsage;
        }
        for (int i = 0; i < 4; ++i) cfg.params[static_cast<std::size_t>(i)] = vals[static_cast<std::size_t>(i)];
    } else if (params_required) {
        emit_error(err, "--params is required");
        return kExitUsage;
    }

    if (!raw.initial.empty()) {
        if (!parse_doubles(raw.initial, ',', 2, vals)) {
            emit_error(err, "--initial expects x,y");
            return kExitUsage;
        }
        cfg.initial = ratsys::Point{vals[0], vals[1]};
    }
    if (!raw.horizon.empty()) {
        // orbits keep their full point list; keep requests desk-scale
        if (!parse_size(raw.horizon, cfg.horizon) || cfg.horizon == 0 ||
            cfg.horizon > 1000000) {
            emit_error(err, "--horizon expects a positive integer <= 10^6");
            return kExitUsage;
        }
        cfg.horizon_given = true;
    }
    struct TolBinding {
        const std::string* text;
        double* slot;
        const char* name;
    };
    const TolBinding tols[] = {
        {&raw.divide_tol, &cfg.divide_tol, "--divide-tol"},
        {&raw.cluster_tol, &cfg.cluster_tol, "--cluster-tol"},
        {&raw.membership_tol, &cfg.membership_tol, "--membership-tol"},
        {&raw.period_tol, &cfg.period_tol, "--period-tol"},
    };
    for (const auto& t : tols) {
        if (t.text->empty()) continue;
        if (!parse_positive(*t.text, *t.slot)) {
            emit_error(err, std::string(t.name) + " expects a positive real");
            return kExitUsage;
        }
    }
    if (!raw.format.empty()) {
        if (raw.format == "json") {
            cfg.format = ratsys::cli::Format::Json;
        } else if (raw.format == "csv") {
            cfg.format = ratsys::cli::Format::Csv;
        } else if (raw.format == "svg") {
            cfg.format = ratsys::cli::Format::Svg;
        } else {
            emit_error(err, "--format must be json, csv or svg");
            return kExitUsage;
        }
    }
    if (!raw.seed.empty()) {
        std::size_t s = 0;
        if (!parse_size(raw.seed, s)) {
            emit_error(err, "--seed expects a nonnegative integer");
            return kExitUsage;
        }
        cfg.seed = s;
    }
    if (!raw.samples.empty()) {
        if (!parse_size(raw.samples, cfg.samples) || cfg.samples == 0) {
            emit_error(err, "--samples expects a positive integer");
            return kExitUsage;
        }
    }
    if (!raw.orbits.empty()) {
        if (!parse_size(raw.orbits, cfg.n_orbits)) {
            emit_error(err, "--orbits expects a nonnegative integer");
            return kExitUsage;
        }
    }
    if (!raw.viewport.empty()) {
        if (!parse_doubles(raw.viewport, ':', 4, vals)) {
            emit_error(err, "--viewport expects xmin:xmax:ymin:ymax");
            return kExitUsage;
        }
        cfg.viewport = ratsys::cli::Viewport{vals[0], vals[1], vals[2], vals[3]};
    }
    for (int i = 0; i < 4; ++i) {
        const std::string& ax = raw.axis[static_cast<std::size_t>(i)];
        if (ax.empty()) continue;
        auto& slot = cfg.axes[static_cast<std::size_t>(i)];
        if (parse_doubles(ax, ':', 2, vals)) {
            slot = ratsys::cli::AxisRange{vals[0], vals[1], true};
        } else if (parse_doubles(ax, ':', 1, vals)) {
            slot = ratsys::cli::AxisRange{vals[0], vals[0], false};
        } else {
            emit_error(err, "axis option expects a value or lo:hi");
            return kExitUsage;
        }
    }
    return 0;
}

void add_common_options(CLI::App* sub, RawOptions& raw) {
    sub->add_option("--params", raw.params, "coefficients alpha1,beta1,alpha2,beta2");
    sub->add_option("--horizon", raw.horizon,
                    "iteration/forbidden horizon (default 1000; forbidden listing 64)");
    sub->add_option("--divide-tol", raw.divide_tol, "relative divide guard (default 1e-12)");
    sub->add_option("--cluster-tol", raw.cluster_tol,
                    "root clustering tolerance (default 1e-8)");
    sub->add_option("--membership-tol", raw.membership_tol,
                    "line membership tolerance (default 1e-9)");
    sub->add_option("--period-tol", raw.period_tol,
                    "period detection tolerance (default 1e-8)");
    sub->add_option("--format", raw.format, "output format: json|csv|svg (default json)");
    sub->add_option("--seed", raw.seed, "seed for sampled probes (default 0)");
    sub->add_option("--config", raw.config_path,
                    "flat key=value config file; flags override");
}

}  // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);

    CLI::App app{"analyze the planar rational system x' = (a1 + b1 x)/y, y' = (a2 + b2 x)/y"};
    app.require_subcommand(1);

    RawOptions raw_classify, raw_simulate, raw_forbidden, raw_sweep, raw_portrait;

    CLI::App* classify =
        app.add_subcommand("classify", "spectrum, equilibria, stability and verdicts");
    add_common_options(classify, raw_classify);
    classify->add_option("--initial", raw_classify.initial, "initial condition x,y");

    CLI::App* simulate =
        app.add_subcommand("simulate", "trajectory with closed-form cross-check");
    add_common_options(simulate, raw_simulate);
    simulate->add_option("--initial", raw_simulate.initial, "initial condition x,y");

    CLI::App* forbidden = app.add_subcommand("forbidden", "forbidden-set lines");
    add_common_options(forbidden, raw_forbidden);

    CLI::App* sweep = app.add_subcommand("sweep", "parameter grid classification (csv)");
    add_common_options(sweep, raw_sweep);
    sweep->add_option("--alpha1", raw_sweep.axis[0], "value or lo:hi");
    sweep->add_option("--beta1", raw_sweep.axis[1], "value or lo:hi");
    sweep->add_option("--alpha2", raw_sweep.axis[2], "value or lo:hi");
    sweep->add_option("--beta2", raw_sweep.axis[3], "value or lo:hi");
    sweep->add_option("--samples", raw_sweep.samples, "samples per ranged axis (default 5)");

    CLI::App* portrait = app.add_subcommand("portrait", "static SVG phase portrait");
    add_common_options(portrait, raw_portrait);
    portrait->add_option("--initial", raw_portrait.initial, "highlighted initial condition x,y");
    portrait->add_option("--viewport", raw_portrait.viewport,
                         "xmin:xmax:ymin:ymax (default -3:3:-3:3)");
    portrait->add_option("--orbits", raw_portrait.orbits, "sampled orbit count (default 12)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ratsys::cli::kExitUsage;
    }

    RunConfig cfg;
    int rc = 0;
    if (classify->parsed()) {
        rc = build_config(classify, raw_classify, cfg, true, std::cerr);
        if (rc != 0) return rc;
        return ratsys::cli::cmd_classify(cfg, std::cout, std::cerr);
    }
    if (simulate->parsed()) {
        rc = build_config(simulate, raw_simulate, cfg, true, std::cerr);
        if (rc != 0) return rc;
        if (raw_simulate.format.empty()) cfg.format = ratsys::cli::Format::Csv;
        return ratsys::cli::cmd_simulate(cfg, std::cout, std::cerr);
    }
    if (forbidden->parsed()) {
        rc = build_config(forbidden, raw_forbidden, cfg, true, std::cerr);
        if (rc != 0) return rc;
        return ratsys::cli::cmd_forbidden(cfg, std::cout, std::cerr);
    }
    if (sweep->parsed()) {
        rc = build_config(sweep, raw_sweep, cfg, false, std::cerr);
        if (rc != 0) return rc;
        return ratsys::cli::cmd_sweep(cfg, std::cout, std::cerr);
    }
    rc = build_config(portrait, raw_portrait, cfg, false, std::cerr);
    if (rc != 0) return rc;
    if (raw_portrait.params.empty()) {
        ratsys::cli::emit_error(std::cerr, "--params is required");
        return ratsys::cli::kExitUsage;
    }
    return ratsys::cli::cmd_portrait(cfg, std::cout, std::cerr);
}
