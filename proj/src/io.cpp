#include "goodwill/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "goodwill/errors.hpp"
#include "goodwill/numerics.hpp"

namespace goodwill {

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("short write to '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("cannot rename '" + tmp + "' to '" + path + "': " +
                      std::strerror(errno));
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::string full_precision(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string grid_to_text(const GridField& grid) {
    grid.validate();
    std::string text = "GRID " + std::to_string(grid.nx) + ' ' +
                       std::to_string(grid.ny) + ' ' + full_precision(grid.length_L) +
                       ' ' + full_precision(grid.height_H) + '\n';
    for (double v : grid.values) {
        text += full_precision(v);
        text += '\n';
    }
    return text;
}

GridField grid_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    GridField g;
    if (!(in >> magic) || magic != "GRID")
        throw IoError("grid dump must start with 'GRID'");
    if (!(in >> g.nx >> g.ny >> g.length_L >> g.height_H))
        throw IoError("grid dump header is malformed");
    if (g.nx <= 0 || g.ny <= 0) throw IoError("grid dump has non-positive dimensions");
    g.values.reserve(static_cast<size_t>(g.nx) * g.ny);
    double v;
    while (in >> v) g.values.push_back(v);
    if (static_cast<int>(g.values.size()) != g.nx * g.ny)
        throw IoError("grid dump holds " + std::to_string(g.values.size()) +
                      " values, expected " + std::to_string(g.nx * g.ny));
    g.validate();
    return g;
}

namespace {

std::string mode_header(const DomainSpec& domain) {
    std::string h = "t";
    for (int m = 0; m <= domain.modes_M; ++m)
        for (int n = 0; n <= domain.modes_N; ++n)
            h += ", mode_" + std::to_string(m) + std::to_string(n);
    h += '\n';
    return h;
}

std::string coeff_rows(const std::vector<double>& times,
                       const std::vector<SpectralField>& fields) {
    std::string rows;
    for (size_t i = 0; i < times.size(); ++i) {
        rows += format_double(times[i]);
        for (double c : fields[i].coeffs()) {
            rows += ", ";
            rows += format_double(c);
        }
        rows += '\n';
    }
    return rows;
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
    if (traj.times.empty()) throw ConfigError("cannot export an empty trajectory");
    return mode_header(traj.states.front().domain()) +
           coeff_rows(traj.times, traj.states);
}

std::string control_csv(const ControlSignal& u) {
    if (!u.is_sampled())
        throw ConfigError("per-mode control export needs a sampled control");
    return mode_header(u.values().front().domain()) + coeff_rows(u.times(), u.values());
}

std::string pointwise_control_csv(const ControlSignal& u, const DomainSpec& domain,
                                  double horizon, int nt, int nx, int ny) {
    if (nt < 1 || nx < 1 || ny < 1)
        throw ConfigError("pointwise control export needs positive grid sizes");
    std::string text = "t, xi1, xi2, u\n";
    const std::vector<double> times = uniform_grid(horizon, nt);
    for (double t : times)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                const double x1 = (ix + 0.5) * domain.length_L / nx;
                const double x2 = (iy + 0.5) * domain.height_H / ny;
                text += format_double(t);
                text += ", ";
                text += format_double(x1);
                text += ", ";
                text += format_double(x2);
                text += ", ";
                text += format_double(u.eval(t, x1, x2));
                text += '\n';
            }
    return text;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string text = "k0, value, terminal_miss\n";
    for (const SweepRow& r : rows) {
        text += format_double(r.k0);
        text += ", ";
        text += format_double(r.value);
        text += ", ";
        text += format_double(r.terminal_miss);
        text += '\n';
    }
    return text;
}

}  // namespace goodwill
