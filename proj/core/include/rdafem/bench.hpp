#pragma once

#include "rdafem/kinetics.hpp"
#include "rdafem/stepper.hpp"

#include <span>

namespace rdafem {

/// Time-integrated error and estimator sizes for one refinement level of
/// a manufactured benchmark. Norms are the moving-domain ones:
/// ||e||^2 integrates J e^2 over the reference square, the energy term
/// integrates sum_i D_i J |K^T grad e_i|^2.
struct ErrorRecord {
    double h = 0.0;
    double tau = 0.0;
    double err_l2 = 0.0;     // sqrt int_0^T ||e(t)||^2 dt
    double err_h1 = 0.0;     // sqrt int_0^T sum_i D_i ||grad e_i||^2 dt
    double estimator = 0.0;  // sqrt int_0^T eta(t)^2 dt
};

/// estimator^2 / energy-error^2; Theorem-style reliability keeps this
/// bounded away from zero. Throws on a zero error.
double effectivity(const ErrorRecord& record);

/// EOC_k = log(v_k / v_{k+1}) / log(h_k / h_{k+1}). Requires equal sizes
/// >= 2 and positive entries.
std::vector<double> eoc(std::span<const double> values, std::span<const double> hs);

/// Accumulates the time integrals of the weighted error norms (trapezoid
/// in time) and of the squared global estimator (right rule) over a run.
class ErrorAccumulator {
public:
    ErrorAccumulator(const ManufacturedCase& mcase, const DomainMap& map);

    /// Sample the exact-vs-discrete error at the state's time level.
    void add_state(const P1Space& space, const SystemState& state);
    /// Add tau * eta^2 to the estimator integral.
    void add_estimator(double eta_global, double tau);

    ErrorRecord record(double h, double tau) const;

    /// Instantaneous squared norms at one time level (also used by tests).
    std::pair<double, double> instantaneous(const P1Space& space, const SystemState& state) const;

private:
    const ManufacturedCase* case_;
    const DomainMap* map_;
    bool have_prev_ = false;
    double prev_t_ = 0.0, prev_l2_ = 0.0, prev_h1_ = 0.0;
    double int_l2_ = 0.0, int_h1_ = 0.0, int_eta_ = 0.0;
};

struct EocStudyLevel {
    int n = 0;
    ErrorRecord record;
};

struct EocStudyResult {
    std::vector<EocStudyLevel> levels;
    std::vector<double> eoc_estimator;
    std::vector<double> eoc_l2;
    std::vector<double> eoc_h1;
    std::vector<double> effectivities;
};

/// Uniform-mesh convergence study: for each subdivision level n the
/// timestep is slaved to tau = h^2/4 so the spatial rate dominates, the
/// initial state is the interpolated exact solution, and errors plus the
/// estimator are integrated over [0, t_final].
EocStudyResult run_eoc_study(const ManufacturedCase& mcase, const DomainMap& map,
                             std::span<const int> levels, double t_final,
                             const SolverConfig& solver);

}  // namespace rdafem
