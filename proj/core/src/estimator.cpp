#include "rdafem/estimator.hpp"

#include <cmath>

namespace rdafem {

namespace {

void check_states(const P1Space& space, const SystemState& state_n,
                  const SystemState& state_prev) {
    if (state_n.mesh_version != space.mesh_version() ||
        state_prev.mesh_version != space.mesh_version())
        throw FemError("estimator: states are not bound to the space's mesh version");
    if (state_n.species() != state_prev.species())
        throw FemError("estimator: species count mismatch between time levels");
    for (const auto& u : state_n.u)
        if (u.size() != space.dof_count())
            throw FemError("estimator: coefficient vector does not match the dof count");
    for (const auto& u : state_prev.u)
        if (u.size() != space.dof_count())
            throw FemError("estimator: coefficient vector does not match the dof count");
}

}  // namespace

double element_residual_sq(const P1Space& space, int e, int i, const SystemState& state_n,
                           const SystemState& state_prev, double tau, const DomainMap& map,
                           const KineticsModel& kinetics, double D_i, const SourceFn& sources) {
    check_states(space, state_n, state_prev);
    const int m = state_n.species();
    const double t_n = state_n.t;
    const double t_prev = state_prev.t;
    const Vec2 grad_u = space.gradient_on(
        std::span<const double>(state_n.u[i].data(), state_n.u[i].size()), e);

    std::vector<double> u_q(m);
    std::vector<double> f_q(m);
    double norm_sq = 0.0;
    for (int q = 0; q < TriQuadrature::npoints; ++q) {
        const Vec2& xi = space.quad_point(e, q);
        const double Jn = map.metric_terms(xi, t_n).J;
        const double Jp = map.metric_terms(xi, t_prev).J;
        const Vec2 div_w = map.metric_divergence(xi, t_n);

        for (int k = 0; k < m; ++k) {
            u_q[k] = space.value_at(
                std::span<const double>(state_n.u[k].data(), state_n.u[k].size()), e, q);
        }
        kinetics.eval(u_q, f_q);
        double reaction = f_q[i];
        if (sources) reaction += sources(xi, t_n)[i];

        const double u_n = u_q[i];
        const double u_p = space.value_at(
            std::span<const double>(state_prev.u[i].data(), state_prev.u[i].size()), e, q);
        const double r = (Jn * u_n - Jp * u_p) / tau - D_i * div_w.dot(grad_u) - Jn * reaction;
        norm_sq += TriQuadrature::weights[q] * r * r;
    }
    const double h = space.element_diameter(e);
    return h * h * space.element_area(e) * norm_sq;
}

double edge_jump_sq(const ReferenceMesh& mesh, const P1Space& space, int e, int i,
                    const SystemState& state_n, const DomainMap& map, double D_i) {
    if (state_n.mesh_version != space.mesh_version())
        throw FemError("estimator: state is not bound to the space's mesh version");
    const auto coeffs = std::span<const double>(state_n.u[i].data(), state_n.u[i].size());
    const Vec2 grad_here = space.gradient_on(coeffs, e);
    const auto& coords = space.element_coords(e);

    double total = 0.0;
    const auto& edge_ids = mesh.element_edges(e);
    for (int k = 0; k < 3; ++k) {
        const Vec2& a = coords[k];
        const Vec2& b = coords[(k + 1) % 3];
        const Vec2 ab = b - a;
        const double len = ab.norm();
        const Vec2 nu(ab.y() / len, -ab.x() / len);  // outward for CCW triangles
        const Vec2 mid = 0.5 * (a + b);
        const Mat2 W = map.metric_terms(mid, state_n.t).weight();

        double jump;
        const auto nb = mesh.neighbor(e, edge_ids[k]);
        if (nb) {
            const Vec2 grad_there = space.gradient_on(coeffs, *nb);
            jump = D_i * ((W * (grad_here - grad_there)).dot(nu));
        } else {
            jump = 2.0 * D_i * ((W * grad_here).dot(nu));
        }
        total += 0.5 * len * (len * jump * jump);
    }
    return total;
}

IndicatorField compute_indicators(const ReferenceMesh& mesh, const P1Space& space,
                                  const SystemState& state_n, const SystemState& state_prev,
                                  double tau, const DomainMap& map, const KineticsModel& kinetics,
                                  const Eigen::VectorXd& diffusion, const SourceFn& sources) {
    check_states(space, state_n, state_prev);
    const int m = state_n.species();
    if (diffusion.size() != m) throw FemError("estimator: diffusion vector size mismatch");

    IndicatorField field;
    field.species = m;
    field.mesh_version = space.mesh_version();
    field.t = state_n.t;
    field.eta_sq.assign(static_cast<std::size_t>(space.element_count()) * m, 0.0);
    field.eta_element.assign(space.element_count(), 0.0);

    double global_sq = 0.0;
    for (int e = 0; e < space.element_count(); ++e) {
        double elem_sq = 0.0;
        for (int i = 0; i < m; ++i) {
            const double v =
                element_residual_sq(space, e, i, state_n, state_prev, tau, map, kinetics,
                                    diffusion[i], sources) +
                edge_jump_sq(mesh, space, e, i, state_n, map, diffusion[i]);
            field.eta_sq[e * m + i] = v;
            elem_sq += v;
        }
        field.eta_element[e] = std::sqrt(elem_sq);
        global_sq += elem_sq;
    }
    field.global = std::sqrt(global_sq);
    return field;
}

}  // namespace rdafem
