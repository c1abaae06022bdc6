#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <variant>

#include "gradsense/geometry.hpp"
#include "gradsense/quadrature.hpp"
#include "gradsense/sensing.hpp"

namespace gradsense {

using json = nlohmann::json;

// Initial-state selection for simulation commands.
struct ModeState {
    int n = 1, m = 1;
    double amplitude = 1.0;
};
struct CoeffsState {
    // (n, m, coefficient) triples; unmentioned modes are zero.
    std::vector<std::tuple<int, int, double>> entries;
};
struct BumpState {}; // x0 = x(a1-x) y(a2-y)

using InitialState = std::variant<ModeState, CoeffsState, BumpState>;

// One scan axis: explicit values or a uniform count over [min,max].
struct ScanAxis {
    std::vector<double> values;
};

struct ScanSpec {
    ScanAxis x;
    ScanAxis y; // empty for boundary templates
};

struct RunConfig {
    RectDomain domain;
    std::string a1_text, a2_text; // original spellings, echoed in reports
    BoundaryRegion gamma;
    int J = 10;
    double grouping_tol = 1e-9;
    SensorSuite suite;
    double T = 1.0;
    double dt = 0.01; // default T/100, resolved at parse time
    double rank_tol = 1e-10;
    double pd_tol = 1e-10;
    QuadratureSpec quad;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> reg_lambda; // nullopt = automatic (sigma^2 * sample count)
    InitialState initial_state = BumpState{};
    std::optional<ScanSpec> scan;

    json echo; // normalized parse echo
};

// Strict parse: unknown fields are rejected with their path, malformed values
// raise ParseError, violated invariants raise ValidationError. Side lengths
// accept decimals, "p/q" and "sqrt(k)"; sensor coordinates accept decimals
// (treated as declared-irrational) and "p/q" (exact fraction of the axis).
RunConfig parse_config(const json& j);
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Expands the configured initial state into flat coefficients on ms.
Eigen::VectorXd initial_state_coeffs(const RunConfig& cfg, const ModeSet& ms);

} // namespace gradsense
