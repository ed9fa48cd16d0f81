#include "goodwill/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "goodwill/errors.hpp"
#include "goodwill/io.hpp"
#include "goodwill/numerics.hpp"

namespace goodwill {

std::string to_string(ProblemTag tag) {
    switch (tag) {
        case ProblemTag::simulate: return "simulate";
        case ProblemTag::mp_quadratic: return "mp_quadratic";
        case ProblemTag::mp_linear: return "mp_linear";
        case ProblemTag::budget: return "budget";
        case ProblemTag::p1: return "p1";
        case ProblemTag::p2: return "p2";
        case ProblemTag::p2_sweep: return "p2_sweep";
        case ProblemTag::verify: return "verify";
    }
    throw ConfigError("unhandled problem tag");
}

ProblemTag problem_tag_from_string(const std::string& name) {
    static const std::map<std::string, ProblemTag> table = {
        {"simulate", ProblemTag::simulate},
        {"mp_quadratic", ProblemTag::mp_quadratic},
        {"mp_linear", ProblemTag::mp_linear},
        {"budget", ProblemTag::budget},
        {"p1", ProblemTag::p1},
        {"p2", ProblemTag::p2},
        {"p2_sweep", ProblemTag::p2_sweep},
        {"verify", ProblemTag::verify},
    };
    const auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown problem type '" + name + "'");
    return it->second;
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

struct Issues {
    std::vector<std::pair<int, std::string>> items;  // line (0 = whole config)
    void add(int line, std::string what) { items.emplace_back(line, std::move(what)); }
    bool empty() const { return items.empty(); }
    [[noreturn]] void raise() {
        std::stable_sort(items.begin(), items.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::string msg = "configuration errors:";
        for (const auto& [line, what] : items) {
            msg += "\n  ";
            msg += line > 0 ? "line " + std::to_string(line) : std::string("config");
            msg += ": " + what;
        }
        throw ConfigError(msg);
    }
};

bool parse_real(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && std::isfinite(out);
}

bool parse_integer(const std::string& text, int& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) return false;
    if (v < -2147483647L || v > 2147483647L) return false;
    out = static_cast<int>(v);
    return true;
}

bool parse_boolean(const std::string& text, bool& out) {
    const std::string t = trim(text);
    if (t == "true") { out = true; return true; }
    if (t == "false") { out = false; return true; }
    return false;
}

struct FieldAccum {
    FieldSpec spec;
    bool touched = false;
    std::vector<int> mode_lines;  // line number per modes[] entry
};

// Applies one `<prefix>_constant / _mode / _grid_file` line to an accumulator.
void apply_field_key(FieldAccum& acc, const std::string& variant,
                     const std::vector<std::string>& args, const std::string& value,
                     const std::string& key_shown, int line, Issues& issues) {
    if (!acc.touched) {
        acc.spec = FieldSpec{};  // drop the built-in default once user speaks
        acc.touched = true;
    }
    auto clash = [&](FieldSpec::Kind want) {
        if (acc.spec.kind != FieldSpec::Kind::zero && acc.spec.kind != want) {
            issues.add(line, "'" + key_shown + "' conflicts with an earlier " +
                                 "specification of the same field");
            return true;
        }
        return false;
    };
    if (variant == "constant") {
        if (clash(FieldSpec::Kind::constant)) return;
        double v;
        if (!args.empty() || !parse_real(value, v)) {
            issues.add(line, "'" + key_shown + "' expects a single real value");
            return;
        }
        acc.spec.kind = FieldSpec::Kind::constant;
        acc.spec.constant = v;
    } else if (variant == "mode") {
        if (clash(FieldSpec::Kind::modes)) return;
        int m, n;
        double v;
        if (args.size() != 2 || !parse_integer(args[0], m) ||
            !parse_integer(args[1], n) || !parse_real(value, v)) {
            issues.add(line, "'" + key_shown + "' expects '<key> m n = coeff'");
            return;
        }
        if (m < 0 || n < 0) {
            issues.add(line, "mode indices must be nonnegative");
            return;
        }
        acc.spec.kind = FieldSpec::Kind::modes;
        acc.spec.modes.emplace_back(m, n, v);
        acc.mode_lines.push_back(line);
    } else {  // grid_file
        if (clash(FieldSpec::Kind::grid_file)) return;
        if (!args.empty() || value.empty()) {
            issues.add(line, "'" + key_shown + "' expects a file path");
            return;
        }
        acc.spec.kind = FieldSpec::Kind::grid_file;
        acc.spec.grid_file = value;
    }
}

void render_field_spec(std::string& out, const std::string& prefix,
                       const FieldSpec& spec) {
    switch (spec.kind) {
        case FieldSpec::Kind::zero:
            break;
        case FieldSpec::Kind::constant:
            out += prefix + "_constant = " + format_double(spec.constant) + '\n';
            break;
        case FieldSpec::Kind::modes:
            for (const auto& [m, n, v] : spec.modes)
                out += prefix + "_mode " + std::to_string(m) + ' ' + std::to_string(n) +
                       " = " + format_double(v) + '\n';
            break;
        case FieldSpec::Kind::grid_file:
            out += prefix + "_grid_file = " + spec.grid_file + '\n';
            break;
    }
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& base_dir,
                            std::optional<ProblemTag> forced_problem) {
    ScenarioConfig cfg;
    Issues issues;
    FieldAccum x0_acc, b_acc, target_acc;
    bool seen_rho = false, seen_T = false, seen_R = false, seen_gamma = false,
         seen_M = false, seen_type = false;
    // last line on which each validated key was set (0 = never, report as
    // whole-config)
    int quad_points_line = 0, l_line = 0, h_line = 0, modes_m_line = 0,
        modes_n_line = 0, rho_line = 0, t_line = 0, r_line = 0, gamma_line = 0,
        m_line = 0, time_steps_line = 0, nx_line = 0, ny_line = 0,
        fd_steps_line = 0;

    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                issues.add(line_no, "malformed section header '" + line + "'");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "domain" && section != "model" && section != "problem" &&
                section != "output")
                issues.add(line_no, "unknown section [" + section + "]");
            continue;
        }

        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            issues.add(line_no, "expected 'key = value', got '" + line + "'");
            continue;
        }
        const std::string key_part = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        std::vector<std::string> toks = split_ws(key_part);
        if (toks.empty()) {
            issues.add(line_no, "missing key before '='");
            continue;
        }
        const std::string key = toks[0];
        const std::vector<std::string> args(toks.begin() + 1, toks.end());

        auto want_real = [&](double& slot, bool* seen = nullptr,
                             int* where = nullptr) {
            if (where) *where = line_no;
            double v;
            if (!args.empty() || !parse_real(value, v)) {
                issues.add(line_no, "'" + key + "' expects a real value");
                return;
            }
            slot = v;
            if (seen) *seen = true;
        };
        auto want_int = [&](int& slot, int* where = nullptr) {
            if (where) *where = line_no;
            int v;
            if (!args.empty() || !parse_integer(value, v)) {
                issues.add(line_no, "'" + key + "' expects an integer");
                return;
            }
            slot = v;
        };
        auto unknown = [&]() {
            issues.add(line_no, "unknown key '" + key + "' in [" + section + "]");
        };

        if (section.empty()) {
            issues.add(line_no, "key '" + key + "' appears before any [section]");
        } else if (section == "domain") {
            if (key == "L") want_real(cfg.length_L, nullptr, &l_line);
            else if (key == "H") want_real(cfg.height_H, nullptr, &h_line);
            else if (key == "modes_m") want_int(cfg.modes_m, &modes_m_line);
            else if (key == "modes_n") want_int(cfg.modes_n, &modes_n_line);
            else if (key == "quad_points") want_int(cfg.quad_points, &quad_points_line);
            else unknown();
        } else if (section == "model") {
            if (key == "rho") want_real(cfg.rho, &seen_rho, &rho_line);
            else if (key == "T") want_real(cfg.horizon_T, &seen_T, &t_line);
            else if (key == "R") want_real(cfg.cap_R, &seen_R, &r_line);
            else if (key == "gamma") want_real(cfg.gamma, &seen_gamma, &gamma_line);
            else if (key == "diffusion") {
                bool b;
                if (!args.empty() || !parse_boolean(value, b))
                    issues.add(line_no, "'diffusion' expects true or false");
                else cfg.diffusion = b;
            } else if (key.rfind("x0_", 0) == 0)
                apply_field_key(x0_acc, key.substr(3), args, value, key, line_no, issues);
            else if (key.rfind("b_", 0) == 0)
                apply_field_key(b_acc, key.substr(2), args, value, key, line_no, issues);
            else unknown();
        } else if (section == "problem") {
            if (key == "type") {
                try {
                    cfg.problem = problem_tag_from_string(value);
                    seen_type = true;
                } catch (const ConfigError& e) {
                    issues.add(line_no, e.what());
                }
            } else if (key == "M") want_real(cfg.budget_M, &seen_M, &m_line);
            else if (key == "k0_list") {
                std::vector<double> vals;
                std::string item;
                std::istringstream items(value);
                bool ok = !value.empty();
                while (std::getline(items, item, ',')) {
                    double v;
                    if (!parse_real(item, v)) { ok = false; break; }
                    vals.push_back(v);
                }
                if (!ok || vals.empty())
                    issues.add(line_no, "'k0_list' expects comma-separated reals");
                else cfg.k0_list = std::move(vals);
            } else if (key == "time_steps") want_int(cfg.time_steps, &time_steps_line);
            else if (key == "nx") want_int(cfg.nx, &nx_line);
            else if (key == "ny") want_int(cfg.ny, &ny_line);
            else if (key == "fd_steps") want_int(cfg.fd_steps, &fd_steps_line);
            else if (key == "u_constant") want_real(cfg.u_constant);
            else if (key.rfind("target_", 0) == 0)
                apply_field_key(target_acc, key.substr(7), args, value, key, line_no,
                                issues);
            else unknown();
        } else if (section == "output") {
            if (key == "dir") {
                if (value.empty()) issues.add(line_no, "'dir' expects a path");
                else cfg.output_dir = value;
            } else unknown();
        }
    }

    if (x0_acc.touched) cfg.x0 = x0_acc.spec;
    if (b_acc.touched) cfg.effectiveness_b = b_acc.spec;
    if (target_acc.touched) cfg.target = target_acc.spec;

    if (forced_problem) {
        if (seen_type && cfg.problem != *forced_problem)
            issues.add(0, "config declares type " + to_string(cfg.problem) +
                              " but the " + to_string(*forced_problem) +
                              " subcommand was invoked");
        cfg.problem = *forced_problem;
    }

    // Cross-field and range validation (line numbers where known).
    if (!(cfg.length_L > 0.0)) issues.add(l_line, "'L' must be positive");
    if (!(cfg.height_H > 0.0)) issues.add(h_line, "'H' must be positive");
    if (cfg.modes_m < 0) issues.add(modes_m_line, "'modes_m' must be nonnegative");
    if (cfg.modes_n < 0) issues.add(modes_n_line, "'modes_n' must be nonnegative");
    if (cfg.quad_points < 2 * std::max(cfg.modes_m, cfg.modes_n) + 2)
        issues.add(quad_points_line,
                   "'quad_points' must be at least 2*max(modes_m, modes_n) + 2");
    if (!seen_rho) issues.add(0, "missing required key 'rho' in [model]");
    else if (!(cfg.rho > 0.0)) issues.add(rho_line, "'rho' must be positive");
    if (!seen_T) issues.add(0, "missing required key 'T' in [model]");
    else if (!(cfg.horizon_T > 0.0)) issues.add(t_line, "'T' must be positive");
    if (seen_R && !(cfg.cap_R > 0.0)) issues.add(r_line, "'R' must be positive");
    if (seen_gamma && cfg.gamma < 0.0)
        issues.add(gamma_line, "'gamma' must be nonnegative");
    if (cfg.time_steps < 1)
        issues.add(time_steps_line, "'time_steps' must be at least 1");
    if (cfg.nx < 2) issues.add(nx_line, "'nx' must be at least 2");
    if (cfg.ny < 2) issues.add(ny_line, "'ny' must be at least 2");
    if (cfg.fd_steps < 2) issues.add(fd_steps_line, "'fd_steps' must be at least 2");

    const bool needs_cap = cfg.problem == ProblemTag::mp_quadratic ||
                           cfg.problem == ProblemTag::mp_linear ||
                           cfg.problem == ProblemTag::budget;
    if (needs_cap && !seen_R)
        issues.add(0, "missing required key 'R' in [model] for problem " +
                          to_string(cfg.problem));
    const bool needs_gamma = cfg.problem == ProblemTag::p1 ||
                             cfg.problem == ProblemTag::p2 ||
                             cfg.problem == ProblemTag::p2_sweep;
    if (needs_gamma && (!seen_gamma || !(cfg.gamma > 0.0)))
        issues.add(0, "problem " + to_string(cfg.problem) +
                          " requires 'gamma' > 0 in [model]");
    if (cfg.problem == ProblemTag::budget && (!seen_M || !(cfg.budget_M > 0.0)))
        issues.add(m_line, "problem budget requires 'M' > 0 in [problem]");
    if (cfg.problem == ProblemTag::p2 && cfg.target.kind == FieldSpec::Kind::zero)
        issues.add(0, "problem p2 requires a target_* specification in [problem]");
    if (cfg.problem == ProblemTag::p2_sweep && cfg.k0_list.empty())
        issues.add(0, "problem p2_sweep requires 'k0_list' in [problem]");

    auto check_modes = [&](const FieldAccum& acc, const std::string& name) {
        for (size_t i = 0; i < acc.spec.modes.size(); ++i) {
            const auto& [m, n, v] = acc.spec.modes[i];
            (void)v;
            if (m > cfg.modes_m || n > cfg.modes_n)
                issues.add(acc.mode_lines[i],
                           name + " mode (" + std::to_string(m) + ", " +
                               std::to_string(n) + ") is outside the retained set");
        }
    };
    check_modes(x0_acc, "x0");
    check_modes(b_acc, "b");
    check_modes(target_acc, "target");

    // Resolve grid-file references relative to the config location.
    auto resolve = [&](FieldSpec& spec) {
        if (spec.kind == FieldSpec::Kind::grid_file && !base_dir.empty() &&
            !spec.grid_file.empty() && spec.grid_file.front() != '/')
            spec.grid_file = base_dir + "/" + spec.grid_file;
    };
    resolve(cfg.x0);
    resolve(cfg.effectiveness_b);
    resolve(cfg.target);

    if (!issues.empty()) issues.raise();
    return cfg;
}

std::string render_config(const ScenarioConfig& cfg) {
    std::string out;
    out += "[domain]\n";
    out += "L = " + format_double(cfg.length_L) + '\n';
    out += "H = " + format_double(cfg.height_H) + '\n';
    out += "modes_m = " + std::to_string(cfg.modes_m) + '\n';
    out += "modes_n = " + std::to_string(cfg.modes_n) + '\n';
    out += "quad_points = " + std::to_string(cfg.quad_points) + '\n';
    out += "\n[model]\n";
    out += "rho = " + format_double(cfg.rho) + '\n';
    out += "T = " + format_double(cfg.horizon_T) + '\n';
    out += "R = " + format_double(cfg.cap_R) + '\n';
    out += "gamma = " + format_double(cfg.gamma) + '\n';
    out += std::string("diffusion = ") + (cfg.diffusion ? "true" : "false") + '\n';
    render_field_spec(out, "x0", cfg.x0);
    render_field_spec(out, "b", cfg.effectiveness_b);
    out += "\n[problem]\n";
    out += "type = " + to_string(cfg.problem) + '\n';
    if (cfg.budget_M != 0.0) out += "M = " + format_double(cfg.budget_M) + '\n';
    if (!cfg.k0_list.empty()) {
        out += "k0_list = ";
        for (size_t i = 0; i < cfg.k0_list.size(); ++i) {
            if (i) out += ", ";
            out += format_double(cfg.k0_list[i]);
        }
        out += '\n';
    }
    render_field_spec(out, "target", cfg.target);
    out += "time_steps = " + std::to_string(cfg.time_steps) + '\n';
    out += "nx = " + std::to_string(cfg.nx) + '\n';
    out += "ny = " + std::to_string(cfg.ny) + '\n';
    out += "fd_steps = " + std::to_string(cfg.fd_steps) + '\n';
    out += "u_constant = " + format_double(cfg.u_constant) + '\n';
    out += "\n[output]\n";
    out += "dir = " + cfg.output_dir + '\n';
    return out;
}

namespace {

double bilinear_sample(const GridField& g, double x, double y) {
    auto axis = [](double coord, double extent, int cells, int& i0, double& frac) {
        if (cells == 1) { i0 = 0; frac = 0.0; return; }
        const double u = coord / (extent / cells) - 0.5;
        double fl = std::floor(u);
        i0 = static_cast<int>(fl);
        frac = u - fl;
        if (i0 < 0) { i0 = 0; frac = 0.0; }
        if (i0 > cells - 2) { i0 = cells - 2; frac = 1.0; }
    };
    int ix, iy;
    double fx, fy;
    axis(x, g.length_L, g.nx, ix, fx);
    axis(y, g.height_H, g.ny, iy, fy);
    const int ix1 = std::min(ix + 1, g.nx - 1), iy1 = std::min(iy + 1, g.ny - 1);
    const double v00 = g.values[static_cast<size_t>(iy) * g.nx + ix];
    const double v10 = g.values[static_cast<size_t>(iy) * g.nx + ix1];
    const double v01 = g.values[static_cast<size_t>(iy1) * g.nx + ix];
    const double v11 = g.values[static_cast<size_t>(iy1) * g.nx + ix1];
    return (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) +
           fy * ((1.0 - fx) * v01 + fx * v11);
}

}  // namespace

SpectralField realize_field_spec(const FieldSpec& spec, const DomainSpec& domain,
                                 std::vector<std::string>* warnings) {
    switch (spec.kind) {
        case FieldSpec::Kind::zero:
            return SpectralField(domain);
        case FieldSpec::Kind::constant:
            return constant_field(domain, spec.constant);
        case FieldSpec::Kind::modes: {
            SpectralField f(domain);
            for (const auto& [m, n, v] : spec.modes) {
                if (m < 0 || n < 0 || m > domain.modes_M || n > domain.modes_N)
                    throw ConfigError("mode (" + std::to_string(m) + ", " +
                                      std::to_string(n) + ") is outside the retained set");
                f.coeffs()[domain.flat_index(m, n)] = v;
            }
            return f;
        }
        case FieldSpec::Kind::grid_file: {
            const GridField g = grid_from_text(read_file(spec.grid_file));
            if (std::abs(g.length_L - domain.length_L) >
                    1e-9 * std::max(1.0, domain.length_L) ||
                std::abs(g.height_H - domain.height_H) >
                    1e-9 * std::max(1.0, domain.height_H))
                throw ConfigError("grid file '" + spec.grid_file +
                                  "' extents do not match the domain");
            SpectralField f = project(
                domain, [&](double x, double y) { return bilinear_sample(g, x, y); });
            if (warnings) {
                std::vector<std::pair<double, double>> cells;
                cells.reserve(g.values.size());
                for (int iy = 0; iy < g.ny; ++iy)
                    for (int ix = 0; ix < g.nx; ++ix)
                        cells.emplace_back(g.cell_x1(ix), g.cell_x2(iy));
                const std::vector<double> recon = reconstruct(f, cells);
                double num = 0.0, den = 0.0;
                for (size_t i = 0; i < recon.size(); ++i) {
                    const double d = g.values[i] - recon[i];
                    num += d * d;
                    den += g.values[i] * g.values[i];
                }
                if (den > 0.0 && num > 0.01 * den)
                    warnings->push_back(
                        "grid file '" + spec.grid_file + "': " +
                        format_double(100.0 * std::sqrt(num / den)) +
                        "% of its content lies outside the retained modes");
            }
            return f;
        }
    }
    throw ConfigError("unhandled field specification");
}

}  // namespace goodwill
