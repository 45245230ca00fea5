#pragma once

#include "rdafem/adapt.hpp"
#include "rdafem/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rdafem {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Full run description as read from the sectioned key=value config file.
/// Every numeric constraint of the downstream modules is checked at load;
/// unknown sections or keys are rejected.
struct RunConfig {
    struct Map {
        std::string kind = "identity";  // identity | dilation | anisotropic | surface
        double amplitude = 1.0;
        double period = 1.0;
        double amplitude_y = 1.0;  // anisotropic only
        double period_y = 1.0;
    } map;

    struct Kinetics {
        std::string name = "schnakenberg";  // schnakenberg | zero
        double gamma = 1.0;
        double k1 = 0.1;
        double k2 = 0.9;
        int species = 2;
        std::vector<double> diffusion{1.0, 10.0};
    } kinetics;

    int grid_n = 4;

    double tau = 1e-2;
    double t_final = 1.0;

    SolverConfig solver{};

    struct Adapt {
        bool enabled = false;
        AdaptConfig cfg{};
    } adapt;

    struct Output {
        std::string directory = "out";
        int snapshot_stride = 0;  // 0: initial/final snapshots only
        bool csv = true;
        bool vtk = true;
    } output;

    std::uint64_t seed = 0;

    std::vector<int> bench_levels{8, 16, 32, 64};

    void validate() const;  // throws ConfigError naming key and constraint
};

/// Parse and validate a config file. Parse errors carry the line number,
/// constraint violations the section.key path. An empty file yields the
/// all-defaults configuration.
RunConfig load_config(const std::string& path);

/// Same parser over an in-memory string; `origin` names the source in
/// error messages.
RunConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace rdafem
