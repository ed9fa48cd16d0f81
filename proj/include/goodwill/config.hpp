#pragma once

// Line-oriented scenario configuration: `[section]` headers and `key = value`
// lines, diff-friendly and schema-free. Parsing validates everything it can
// and reports ALL violations at once, each with its line number.

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "goodwill/spectral_basis.hpp"

namespace goodwill {

enum class ProblemTag {
    simulate,
    mp_quadratic,
    mp_linear,
    budget,
    p1,
    p2,
    p2_sweep,
    verify,
};

std::string to_string(ProblemTag tag);
ProblemTag problem_tag_from_string(const std::string& name);

// How a spatial field (initial state, effectiveness, target) is specified:
// nothing (zero field), a constant level, explicit mode coefficients, or a
// grid dump file to be projected onto the retained modes.
struct FieldSpec {
    enum class Kind { zero, constant, modes, grid_file };
    Kind kind = Kind::zero;
    double constant = 0.0;
    std::vector<std::tuple<int, int, double>> modes;  // (m, n, coefficient)
    std::string grid_file;

    bool operator==(const FieldSpec&) const = default;
};

struct ScenarioConfig {
    // [domain]
    double length_L = 1.0;
    double height_H = 1.0;
    int modes_m = 8;
    int modes_n = 8;
    int quad_points = 64;

    // [model]
    double rho = 0.0;
    double horizon_T = 0.0;
    double cap_R = 1.0;
    double gamma = 0.0;
    bool diffusion = true;
    FieldSpec x0;
    FieldSpec effectiveness_b{FieldSpec::Kind::constant, 1.0, {}, {}};

    // [problem]
    ProblemTag problem = ProblemTag::simulate;
    double budget_M = 0.0;
    std::vector<double> k0_list;
    FieldSpec target;
    int time_steps = 200;
    int nx = 48;
    int ny = 48;
    int fd_steps = 400;
    double u_constant = 0.0;

    // [output]
    std::string output_dir = "out";

    bool operator==(const ScenarioConfig&) const = default;
};

// Parse configuration text. `base_dir` is the directory of the config file;
// relative grid-file references are resolved against it. A CLI subcommand may
// force the problem tag: an explicit conflicting `type` key is then an error,
// and tag-specific requirements are checked against the forced tag. Throws
// ConfigError whose message lists every violation with its line number.
ScenarioConfig parse_config(const std::string& text, const std::string& base_dir = "",
                            std::optional<ProblemTag> forced_problem = std::nullopt);

// Inverse of parse_config: parse_config(render_config(c)) == c.
std::string render_config(const ScenarioConfig& config);

// Materialize a field spec on a concrete domain. Grid files are read, checked
// against the domain extents, bilinearly interpolated, and projected onto the
// retained modes; if more than 1% of the grid's energy lies outside those
// modes a warning is appended to `warnings`.
SpectralField realize_field_spec(const FieldSpec& spec, const DomainSpec& domain,
                                 std::vector<std::string>* warnings = nullptr);

}  // namespace goodwill
