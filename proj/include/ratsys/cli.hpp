#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "ratsys/classify.hpp"

// Command-line surface: classification reports, trajectory export,
// forbidden-set listing, parameter sweeps and static SVG phase portraits.
// Commands write their document to the given stream and return a process
// exit code: 0 ok, 2 degenerate parameters, 3 usage error, 4 initial
// condition on the forbidden set.

namespace ratsys::cli {

enum class Format { Json, Csv, Svg };

struct AxisRange {
    double lo = 0.0;
    double hi = 0.0;
    bool ranged = false;  // false: constant axis at lo
};

struct Viewport {
    double xmin = -3.0, xmax = 3.0, ymin = -3.0, ymax = 3.0;

    bool empty() const { return !(xmax > xmin) || !(ymax > ymin); }
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
};

struct RunConfig {
    std::array<double, 4> params{};  // alpha1, beta1, alpha2, beta2
    std::optional<Point> initial;
    std::size_t horizon = 1000;
    bool horizon_given = false;  // forbidden listing defaults to 64 when not
    double divide_tol = kDefaultDivideTol;
    double cluster_tol = kDefaultClusterTol;
    double membership_tol = kDefaultMembershipTol;
    double period_tol = 1e-8;
    Format format = Format::Json;
    std::uint64_t seed = 0;

    // sweep
    std::array<AxisRange, 4> axes{};
    std::size_t samples = 5;

    // portrait
    Viewport viewport{};
    std::size_t n_orbits = 12;

    ClassifyOptions classify_options() const;
};

int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_forbidden(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_portrait(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitDegenerate = 2;
inline constexpr int kExitUsage = 3;
inline constexpr int kExitForbiddenInitial = 4;

/// Locale-independent float formatting: 17 significant digits, '.' decimal
/// separator, round-trip safe.
std::string format_double(double v);
/// Fixed-point with the given number of decimals (SVG coordinates).
std::string format_fixed(double v, int decimals);

/// Deterministic JSON serialization: insertion key order, floats through
/// format_double, 2-space indent. Parsing a dumped report and re-dumping it
/// reproduces the bytes.
void dump_json(const nlohmann::ordered_json& j, std::ostream& out, int indent = 0);
std::string dump_json(const nlohmann::ordered_json& j);

/// The full classification report as a JSON document (also used by the csv
/// renderer and the tests).
nlohmann::ordered_json build_report(const RunConfig& cfg);

/// Diagnostic line on err; honors NO_COLOR.
void emit_error(std::ostream& err, const std::string& message);

}  // namespace ratsys::cli
