#pragma once

#include "rdafem/fem.hpp"
#include "rdafem/kinetics.hpp"

namespace rdafem {

/// Per-species source terms s_i(xi, t) added to the reaction vector
/// (manufactured benchmarks); empty means no source.
using SourceFn = std::function<Eigen::VectorXd(const Vec2& xi, double t)>;

/// Element-local error indicator values and the global estimator.
struct IndicatorField {
    int species = 0;
    std::uint64_t mesh_version = 0;
    double t = 0.0;
    std::vector<double> eta_sq;       // squared indicator, [element * species + i]
    std::vector<double> eta_element;  // per-element combined sqrt(sum_i eta_sq)
    double global = 0.0;              // sqrt(sum over everything)

    int element_count() const {
        return species == 0 ? 0 : static_cast<int>(eta_sq.size()) / species;
    }
    double eta_sq_at(int e, int i) const { return eta_sq[e * species + i]; }
};

/// Interior residual part of the indicator for one element and species:
/// h_s^2 ||dbar(J u) - D_i (div W) . grad u - J (f_i(u) + s_i)||^2_{L2(s)},
/// evaluated with the scheme's backward difference in time and the element's
/// constant P1 gradient.
double element_residual_sq(const P1Space& space, int e, int i, const SystemState& state_n,
                           const SystemState& state_prev, double tau, const DomainMap& map,
                           const KineticsModel& kinetics, double D_i,
                           const SourceFn& sources = {});

/// Edge jump part: 1/2 sum_{edges} |edge| || D_i [[ J K K^T grad u . nu ]] ||^2_{L2(edge)},
/// metric sampled at edge midpoints; boundary edges contribute twice the
/// one-sided co-normal flux.
double edge_jump_sq(const ReferenceMesh& mesh, const P1Space& space, int e, int i,
                    const SystemState& state_n, const DomainMap& map, double D_i);

/// All local indicators eta_{i|s}^2 = element residual + edge jump and the
/// global estimator. Both states must live on the mesh of `space`.
IndicatorField compute_indicators(const ReferenceMesh& mesh, const P1Space& space,
                                  const SystemState& state_n, const SystemState& state_prev,
                                  double tau, const DomainMap& map, const KineticsModel& kinetics,
                                  const Eigen::VectorXd& diffusion, const SourceFn& sources = {});

}  // namespace rdafem
