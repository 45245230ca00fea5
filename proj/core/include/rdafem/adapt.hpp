#pragma once

#include "rdafem/estimator.hpp"
#include "rdafem/stepper.hpp"

namespace rdafem {

/// Equidistribution marking parameters. An element is marked for
/// refinement when its combined indicator exceeds theta * tol / N (N the
/// current element count) and for coarsening when its indicator plus its
/// sibling's stays below theta_c * tol / N. The iteration and dof caps
/// guard against tolerances that are unreachable in finite precision.
struct AdaptConfig {
    double tol = 1e-4;
    double theta = 0.8;
    double theta_c = 0.1;
    int max_iterations = 20;
    int max_dofs = 500000;

    void validate() const;
};

/// Threshold marking on an indicator field. Deterministic: equal fields
/// and configs give equal mark sets; the two sets are disjoint because
/// theta_c < theta.
MarkSet mark(const IndicatorField& field, const AdaptConfig& cfg, const ReferenceMesh& mesh);

struct AdaptStepResult {
    ReferenceMesh mesh;
    SystemState state;       // accepted solution at the new time level
    SystemState prev_state;  // the previous level transferred onto mesh
    IndicatorField field;
    int iterations = 0;
    bool cap_hit = false;            // accepted with global > tol because a cap hit
    std::vector<double> eta_trace;   // global estimator per loop pass, first entry pre-adaptation
};

/// One timestep of the solve-estimate-mark-adapt loop: solve on the
/// current mesh, estimate, and while the global estimator exceeds tol
/// mark, adapt (coarsen then refine), transfer the previous state, and
/// re-solve. Elements created by refinement within this loop are never
/// coarsened by it.
AdaptStepResult adapt_step(const SystemState& prev, const ReferenceMesh& mesh,
                           const DomainMap& map, const KineticsModel& kinetics,
                           const StepConfig& step_cfg, const AdaptConfig& adapt_cfg,
                           const SourceFn& sources = {});

}  // namespace rdafem
