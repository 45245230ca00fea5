#include "rdafem/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rdafem {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

struct Parser {
    const std::string& origin;
    RunConfig cfg;
    int species_seen = 2;

    [[noreturn]] void fail_line(int line, const std::string& msg) const {
        std::ostringstream os;
        os << origin << ":" << line << ": " << msg;
        throw ConfigError(os.str());
    }

    static double to_double(const std::string& v, const std::string& path) {
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return d;
        } catch (...) {
            throw ConfigError("'" + path + "': not a number (got '" + v + "')");
        }
    }
    static long to_int(const std::string& v, const std::string& path) {
        try {
            std::size_t pos = 0;
            const long d = std::stol(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return d;
        } catch (...) {
            throw ConfigError("'" + path + "': not an integer (got '" + v + "')");
        }
    }
    static bool to_bool(const std::string& v, const std::string& path) {
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw ConfigError("'" + path + "': not a boolean (got '" + v + "')");
    }

    void set(const std::string& section, const std::string& key, const std::string& value) {
        const std::string path = section + "." + key;
        if (section == "map") {
            if (key == "kind") cfg.map.kind = value;
            else if (key == "amplitude") cfg.map.amplitude = to_double(value, path);
            else if (key == "period") cfg.map.period = to_double(value, path);
            else if (key == "amplitude_y") cfg.map.amplitude_y = to_double(value, path);
            else if (key == "period_y") cfg.map.period_y = to_double(value, path);
            else throw ConfigError("unknown key '" + path + "'");
        } else if (section == "kinetics") {
            if (key == "name") cfg.kinetics.name = value;
            else if (key == "gamma") cfg.kinetics.gamma = to_double(value, path);
            else if (key == "k1") cfg.kinetics.k1 = to_double(value, path);
            else if (key == "k2") cfg.kinetics.k2 = to_double(value, path);
            else if (key == "species") cfg.kinetics.species = static_cast<int>(to_int(value, path));
            else if (key.size() == 2 && key[0] == 'd' && key[1] >= '1' && key[1] <= '9') {
                const int i = key[1] - '1';
                if (static_cast<int>(cfg.kinetics.diffusion.size()) < i + 1)
                    cfg.kinetics.diffusion.resize(i + 1, 0.0);
                cfg.kinetics.diffusion[i] = to_double(value, path);
                species_seen = std::max(species_seen, i + 1);
            } else {
                throw ConfigError("unknown key '" + path + "'");
            }
        } else if (section == "grid") {
            if (key == "n") cfg.grid_n = static_cast<int>(to_int(value, path));
            else throw ConfigError("unknown key '" + path + "'");
        } else if (section == "time") {
            if (key == "tau") cfg.tau = to_double(value, path);
            else if (key == "t_final") cfg.t_final = to_double(value, path);
            else throw ConfigError("unknown key '" + path + "'");
        } else if (section == "solver") {
            if (key == "method") cfg.solver.method = solver_method_from_name(value);
            else if (key == "rtol") cfg.solver.rtol = to_double(value, path);
            else if (key == "max_iterations")
                cfg.solver.max_iterations = static_cast<int>(to_int(value, path));
            else throw ConfigError("unknown key '" + path + "'");
        } else if (section == "adapt") {
            if (key == "enabled") cfg.adapt.enabled = to_bool(value, path);
            else if (key == "tol") cfg.adapt.cfg.tol = to_double(value, path);
            else if (key == "theta") cfg.adapt.cfg.theta = to_double(value, path);
            else if (key == "theta_c") cfg.adapt.cfg.theta_c = to_double(value, path);
            else if (key == "max_iterations")
                cfg.adapt.cfg.max_iterations = static_cast<int>(to_int(value, path));
            else if (key == "max_dofs") cfg.adapt.cfg.max_dofs = static_cast<int>(to_int(value, path));
            else throw ConfigError("unknown key '" + path + "'");
        } else if (section == "output") {
            if (key == "directory") cfg.output.directory = value;
            else if (key == "snapshot_stride")
                cfg.output.snapshot_stride = static_cast<int>(to_int(value, path));
            else if (key == "formats") {
                cfg.output.csv = cfg.output.vtk = false;
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    item = trim(item);
                    if (item == "csv") cfg.output.csv = true;
                    else if (item == "vtk") cfg.output.vtk = true;
                    else throw ConfigError("'" + path + "': unknown format '" + item + "'");
                }
            } else {
                throw ConfigError("unknown key '" + path + "'");
            }
        } else if (section == "run") {
            if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(value, path));
            else throw ConfigError("unknown key '" + path + "'");
        } else if (section == "bench") {
            if (key == "levels") {
                cfg.bench_levels.clear();
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    cfg.bench_levels.push_back(static_cast<int>(to_int(trim(item), path)));
                }
            } else {
                throw ConfigError("unknown key '" + path + "'");
            }
        } else {
            throw ConfigError("unknown section '[" + section + "]'");
        }
    }
};

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    Parser p{origin, {}, 2};
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto pos = line.find_first_of("#;"); pos != std::string::npos)
            line = line.substr(0, pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') p.fail_line(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) p.fail_line(line_no, "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) p.fail_line(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) p.fail_line(line_no, "empty key");
        if (section.empty()) p.fail_line(line_no, "key outside any [section]");
        try {
            p.set(section, key, value);
        } catch (const ConfigError& e) {
            p.fail_line(line_no, e.what());
        } catch (const SolverError& e) {
            p.fail_line(line_no, e.what());
        }
    }

    if (p.cfg.kinetics.name == "schnakenberg") p.cfg.kinetics.species = 2;
    p.cfg.kinetics.diffusion.resize(p.cfg.kinetics.species,
                                    p.cfg.kinetics.diffusion.empty()
                                        ? 1.0
                                        : p.cfg.kinetics.diffusion.back());
    p.cfg.validate();
    return p.cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };

    require(map.kind == "identity" || map.kind == "dilation" || map.kind == "anisotropic" ||
                map.kind == "surface",
            "'map.kind' must be identity, dilation, anisotropic or surface (got '" + map.kind +
                "')");
    require(map.period > 0.0, "'map.period' must be positive");
    require(map.period_y > 0.0, "'map.period_y' must be positive");

    require(kinetics.name == "schnakenberg" || kinetics.name == "zero",
            "'kinetics.name' must be schnakenberg or zero (got '" + kinetics.name + "')");
    if (kinetics.name == "schnakenberg") {
        require(kinetics.gamma > 0.0, "'kinetics.gamma' must be positive");
        require(kinetics.k1 > 0.0, "'kinetics.k1' must be positive");
        require(kinetics.k2 > 0.0, "'kinetics.k2' must be positive");
    }
    require(kinetics.species >= 1 && kinetics.species <= 9,
            "'kinetics.species' must be between 1 and 9");
    require(static_cast<int>(kinetics.diffusion.size()) >= kinetics.species,
            "'kinetics.d*': a diffusion coefficient is required per species");
    for (int i = 0; i < kinetics.species; ++i)
        require(kinetics.diffusion[i] > 0.0,
                "'kinetics.d" + std::to_string(i + 1) + "' must be positive");

    require(grid_n >= 1, "'grid.n' must be >= 1");

    require(tau > 0.0, "'time.tau' must be positive");
    require(t_final > 0.0, "'time.t_final' must be positive");
    const double steps = t_final / tau;
    require(std::abs(steps - std::llround(steps)) <= 1e-9 * steps && std::llround(steps) >= 1,
            "'time.t_final' must be an integer multiple of 'time.tau'");

    require(solver.rtol > 0.0, "'solver.rtol' must be positive");
    require(solver.max_iterations >= 1, "'solver.max_iterations' must be >= 1");

    if (adapt.enabled) {
        require(adapt.cfg.tol > 0.0, "'adapt.tol' must be positive");
        require(adapt.cfg.theta > 0.0 && adapt.cfg.theta < 1.0,
                "'adapt.theta' must be in (0,1)");
        require(adapt.cfg.theta_c > 0.0 && adapt.cfg.theta_c < adapt.cfg.theta,
                "'adapt.theta_c' must satisfy 0 < theta_c < theta");
        require(adapt.cfg.max_iterations >= 1, "'adapt.max_iterations' must be >= 1");
        require(adapt.cfg.max_dofs >= 1, "'adapt.max_dofs' must be >= 1");
    }

    require(output.snapshot_stride >= 0, "'output.snapshot_stride' must be >= 0");
    require(!output.directory.empty(), "'output.directory' must not be empty");

    require(!bench_levels.empty(), "'bench.levels' must not be empty");
    for (int n : bench_levels) require(n >= 1, "'bench.levels' entries must be >= 1");
}

}  // namespace rdafem
