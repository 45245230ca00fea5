#pragma once

#include "rdafem/bench.hpp"
#include "rdafem/config.hpp"
#include "rdafem/output.hpp"

#include <memory>
#include <optional>

namespace rdafem {

/// Everything run() needs, materialized from a RunConfig: the domain map,
/// kinetics, step/adapt parameters and the (seeded) initial data.
struct SimulationSetup {
    DomainMap map;
    std::shared_ptr<const KineticsModel> kinetics;
    StepConfig step;
    std::optional<AdaptConfig> adapt;
    std::vector<std::function<double(const Vec2&)>> initial;
};

SimulationSetup make_setup(const RunConfig& cfg);

DomainMap make_map(const RunConfig& cfg);
std::shared_ptr<const KineticsModel> make_kinetics(const RunConfig& cfg);

/// Deterministic random perturbation: a seeded combination of the lowest
/// Neumann-compatible cosine modes, bounded by `amplitude`. A pure
/// function of (seed, xi), identical across meshes and runs; smooth, so
/// the initial state is resolved on the starting grid.
double seeded_perturbation(std::uint64_t seed, const Vec2& xi, double amplitude);

struct SimulationArtifacts {
    RunResult result;
    std::string csv;  // diagnostics stream (header + one row per step)
    std::vector<std::string> snapshot_files;
};

/// Runs the configured simulation. With write_files the diagnostics CSV
/// and VTK snapshots land under cfg.output.directory (regardless, the CSV
/// text is returned).
SimulationArtifacts run_simulation(const RunConfig& cfg, bool write_files,
                                   const StepCallback& extra_callback = {});

/// The Fig-1-style estimator convergence study for the configured map and
/// kinetics (manufactured cosine-decay solution, tau slaved to h^2/4).
EocStudyResult run_eoc_study_for_config(const RunConfig& cfg);

/// CSV table: h, eta, eoc_eta, errL2, eocL2, errH1, eocH1, effectivity.
std::string eoc_table_csv(const EocStudyResult& study);

/// Shipped demo configurations (fig1: estimator EOC benchmark on the
/// dilating square; fig2: adaptive Schnakenberg on the slowly growing
/// square; fig4: adaptive Schnakenberg on the evolving surface).
const std::vector<std::string>& demo_names();
std::string demo_config_text(const std::string& name);

}  // namespace rdafem
