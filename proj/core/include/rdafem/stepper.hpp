#pragma once

#include "rdafem/estimator.hpp"
#include "rdafem/fem.hpp"
#include "rdafem/kinetics.hpp"
#include "rdafem/solver.hpp"

#include <optional>

namespace rdafem {

struct AdaptConfig;  // adapt.hpp

struct StepConfig {
    double tau = 1e-2;
    double t_final = 1.0;
    Eigen::VectorXd diffusion;
    SolverConfig solver{};

    void validate(int species) const;
};

/// One modified implicit Euler step: for each species i solve
///
///   (M^n + tau D_i S^n + tau C_i^n) U_i^n = M^{n-1} U_i^{n-1} + tau b_i^n
///
/// with mass matrices at the two time levels realizing the backward
/// difference of J U, the stiffness fully implicit, and the reaction split
/// semi-implicitly: C_i^n weighs J c_i(U^{n-1}) and b_i^n loads
/// J (g_i(U^{n-1}) + source_i). Species systems are independent; all
/// cross-species coupling is lagged.
SystemState step(const SystemState& prev, const P1Space& space, const DomainMap& map,
                 const KineticsModel& kinetics, const StepConfig& cfg,
                 const SourceFn& sources = {});

/// Same step with the previous-level mass matrix supplied/returned so a
/// time loop assembles each mass matrix once.
SystemState step_cached(const SystemState& prev, const P1Space& space, const DomainMap& map,
                        const KineticsModel& kinetics, const StepConfig& cfg,
                        const SourceFn& sources, const SparseOperator* mass_prev,
                        SparseOperator* mass_new);

/// |Omega_t| = int_ref J dxi by quadrature.
double domain_measure(const P1Space& space, const DomainMap& map, double t);

/// L2(reference) norm of the difference between two coefficient sets on
/// the same space, summed over species.
double state_distance(const P1Space& space, const SystemState& a, const SystemState& b);

/// Per-step diagnostics row (the CSV stream of the CLI).
struct StepRecord {
    int step = 0;
    double t = 0.0;
    int dofs = 0;
    double eta_global = 0.0;
    double delta_u = 0.0;
    double domain_measure = 0.0;
    int adapt_iterations = 0;
    bool cap_hit = false;
};

struct RunResult {
    ReferenceMesh mesh;
    SystemState state;
    std::vector<StepRecord> history;
};

/// Called after each accepted step with everything alive on the current
/// mesh. The indicator field is the one the step was accepted with.
using StepCallback = std::function<void(const StepRecord&, const ReferenceMesh&, const P1Space&,
                                        const SystemState&, const IndicatorField&)>;

/// Time loop from t = 0 to t_final. The initial state is the Lagrange
/// interpolant of `initial`. With an AdaptConfig each step runs the
/// solve-estimate-mark-adapt loop before being accepted; without one the
/// mesh stays fixed. t_final must be an integer multiple of tau.
RunResult run(const std::vector<std::function<double(const Vec2&)>>& initial,
              const ReferenceMesh& mesh, const DomainMap& map, const KineticsModel& kinetics,
              const StepConfig& cfg, const AdaptConfig* adapt = nullptr,
              const SourceFn& sources = {}, const StepCallback& callback = {});

}  // namespace rdafem
