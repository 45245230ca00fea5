#include "rdafem/adapt.hpp"

#include <algorithm>

namespace rdafem {

void AdaptConfig::validate() const {
    if (!(tol > 0.0)) throw FemError("adapt config: tol must be positive");
    if (!(theta > 0.0) || !(theta < 1.0)) throw FemError("adapt config: theta must be in (0,1)");
    if (!(theta_c > 0.0) || !(theta_c < theta))
        throw FemError("adapt config: theta_c must satisfy 0 < theta_c < theta");
    if (max_iterations < 1) throw FemError("adapt config: max_iterations must be >= 1");
    if (max_dofs < 1) throw FemError("adapt config: max_dofs must be >= 1");
}

MarkSet mark(const IndicatorField& field, const AdaptConfig& cfg, const ReferenceMesh& mesh) {
    cfg.validate();
    const int n = mesh.element_count();
    if (field.element_count() != n || field.mesh_version != mesh.version())
        throw FemError("mark: indicator field does not match the mesh");
    if (n == 0) throw FemError("mark: empty indicator field");

    const double refine_threshold = cfg.theta * cfg.tol / n;
    const double coarsen_threshold = cfg.theta_c * cfg.tol / n;

    MarkSet marks;
    for (int e = 0; e < n; ++e) {
        const double eta = field.eta_element[e];
        if (eta > refine_threshold) {
            marks.refine.push_back(e);
        } else if (const auto sib = mesh.sibling(e)) {
            // coarsening indicator: the sibling's value (merge-safety proxy)
            if (eta + field.eta_element[*sib] <= coarsen_threshold) marks.coarsen.push_back(e);
        }
    }
    return marks;
}

AdaptStepResult adapt_step(const SystemState& prev, const ReferenceMesh& mesh,
                           const DomainMap& map, const KineticsModel& kinetics,
                           const StepConfig& step_cfg, const AdaptConfig& adapt_cfg,
                           const SourceFn& sources) {
    adapt_cfg.validate();

    AdaptStepResult out{mesh, {}, prev, {}, 0, false, {}};
    P1Space space(out.mesh);
    out.state = step(out.prev_state, space, map, kinetics, step_cfg, sources);
    out.field = compute_indicators(out.mesh, space, out.state, out.prev_state, step_cfg.tau, map,
                                   kinetics, step_cfg.diffusion, sources);
    out.eta_trace.push_back(out.field.global);

    const std::uint64_t loop_entry_version = out.mesh.version();

    while (out.field.global > adapt_cfg.tol) {
        if (out.iterations >= adapt_cfg.max_iterations) {
            out.cap_hit = true;
            break;
        }

        MarkSet marks = mark(out.field, adapt_cfg, out.mesh);
        // never coarsen an element created by this loop's own refinement
        std::erase_if(marks.coarsen, [&](int e) {
            return out.mesh.element_birth_version(e) > loop_entry_version;
        });
        if (space.dof_count() >= adapt_cfg.max_dofs) marks.refine.clear();
        if (marks.refine.empty() && marks.coarsen.empty()) {
            out.cap_hit = true;
            break;
        }

        // coarsen first, then refine; remap the refine marks across the
        // coarsening (refine-marked elements never merge: the sets are
        // disjoint and only fully marked sibling patches collapse)
        ReferenceMesh next = out.mesh;
        std::vector<double> transferred;
        if (!marks.coarsen.empty()) {
            std::vector<int> old_to_new;
            MarkSet coarsen_only;
            coarsen_only.coarsen = marks.coarsen;
            next = out.mesh.coarsened(coarsen_only, &old_to_new);
            std::vector<int> remapped;
            remapped.reserve(marks.refine.size());
            for (int e : marks.refine) {
                if (old_to_new[e] < 0) throw FemError("adapt: refine-marked element vanished");
                remapped.push_back(old_to_new[e]);
            }
            marks.refine = std::move(remapped);

            SystemState moved;
            moved.t = out.prev_state.t;
            moved.mesh_version = next.version();
            for (const auto& u : out.prev_state.u) {
                auto c = next.transfer_from_parent(out.mesh,
                                                   std::span<const double>(u.data(), u.size()));
                moved.u.push_back(Eigen::Map<const Eigen::VectorXd>(c.data(), c.size()));
            }
            out.prev_state = std::move(moved);
            out.mesh = std::move(next);
        }
        if (!marks.refine.empty()) {
            MarkSet refine_only;
            refine_only.refine = marks.refine;
            next = out.mesh.refined(refine_only);
            SystemState moved;
            moved.t = out.prev_state.t;
            moved.mesh_version = next.version();
            for (const auto& u : out.prev_state.u) {
                auto c = next.transfer_from_parent(out.mesh,
                                                   std::span<const double>(u.data(), u.size()));
                moved.u.push_back(Eigen::Map<const Eigen::VectorXd>(c.data(), c.size()));
            }
            out.prev_state = std::move(moved);
            out.mesh = std::move(next);
        }

        space = P1Space(out.mesh);
        out.state = step(out.prev_state, space, map, kinetics, step_cfg, sources);
        out.field = compute_indicators(out.mesh, space, out.state, out.prev_state, step_cfg.tau,
                                       map, kinetics, step_cfg.diffusion, sources);
        out.eta_trace.push_back(out.field.global);
        ++out.iterations;
    }

    return out;
}

}  // namespace rdafem
