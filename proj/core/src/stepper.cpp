#include "rdafem/stepper.hpp"

#include "rdafem/adapt.hpp"

#include <cmath>
#include <sstream>

namespace rdafem {

void StepConfig::validate(int species) const {
    if (!(tau > 0.0)) throw FemError("step config: tau must be positive");
    if (!(t_final > 0.0)) throw FemError("step config: t_final must be positive");
    if (diffusion.size() != species)
        throw FemError("step config: diffusion vector does not match the species count");
    for (int i = 0; i < diffusion.size(); ++i)
        if (!(diffusion[i] > 0.0)) throw FemError("step config: diffusion coefficients must be positive");
}

SystemState step(const SystemState& prev, const P1Space& space, const DomainMap& map,
                 const KineticsModel& kinetics, const StepConfig& cfg, const SourceFn& sources) {
    return step_cached(prev, space, map, kinetics, cfg, sources, nullptr, nullptr);
}

SystemState step_cached(const SystemState& prev, const P1Space& space, const DomainMap& map,
                        const KineticsModel& kinetics, const StepConfig& cfg,
                        const SourceFn& sources, const SparseOperator* mass_prev,
                        SparseOperator* mass_new) {
    cfg.validate(prev.species());
    if (prev.mesh_version != space.mesh_version())
        throw FemError("step: previous state is not bound to the space's mesh");
    const int m = prev.species();
    const double t_new = prev.t + cfg.tau;
    if (t_new > cfg.t_final + 0.5 * cfg.tau)
        throw FemError("step: time horizon exceeded");

    const int n_dof = space.dof_count();
    const int nq = TriQuadrature::npoints;

    SparseOperator M_prev_local;
    if (!mass_prev) {
        M_prev_local = assemble_mass(space, map, prev.t);
        mass_prev = &M_prev_local;
    }

    // One sweep assembles the new mass and, per species, the full system
    // matrix M + tau D_i S + tau C_i and the load tau-free part b_i.
    std::vector<Eigen::Triplet<double>> mass_trips;
    std::vector<std::vector<Eigen::Triplet<double>>> sys_trips(m);
    mass_trips.reserve(static_cast<std::size_t>(space.element_count()) * 9);
    for (auto& v : sys_trips) v.reserve(static_cast<std::size_t>(space.element_count()) * 9);
    std::vector<Eigen::VectorXd> loads(m, Eigen::VectorXd::Zero(n_dof));

    std::vector<double> u_prev_q(m);
    for (int e = 0; e < space.element_count(); ++e) {
        const double area = space.element_area(e);
        const auto& dofs = space.element_dofs(e);
        const auto& grads = space.basis_gradients(e);

        Eigen::Matrix3d mass_local = Eigen::Matrix3d::Zero();
        Mat2 W_avg = Mat2::Zero();
        std::vector<Eigen::Matrix3d> react_local(m, Eigen::Matrix3d::Zero());
        std::vector<std::array<double, 3>> load_local(m, {0.0, 0.0, 0.0});

        for (int q = 0; q < nq; ++q) {
            const Vec2& xi = space.quad_point(e, q);
            const MetricSample metric = map.metric_terms(xi, t_new);
            const double wq = TriQuadrature::weights[q] * area;
            const auto& l = TriQuadrature::bary[q];

            W_avg += TriQuadrature::weights[q] * metric.weight();

            for (int i = 0; i < m; ++i)
                u_prev_q[i] = space.value_at(
                    std::span<const double>(prev.u[i].data(), prev.u[i].size()), e, q);

            Eigen::VectorXd src;
            if (sources) src = sources(xi, t_new);

            for (int i = 0; i < m; ++i) {
                const auto split = kinetics.split(u_prev_q, i);
                const double mass_w = wq * metric.J;
                const double react_w = mass_w * split.c;
                double rhs = split.g;
                if (sources) rhs += src[i];
                const double load_w = mass_w * rhs;
                for (int a = 0; a < 3; ++a) {
                    load_local[i][a] += load_w * l[a];
                    for (int b = 0; b < 3; ++b) {
                        if (i == 0) mass_local(a, b) += mass_w * l[a] * l[b];
                        react_local[i](a, b) += react_w * l[a] * l[b];
                    }
                }
            }
        }

        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                mass_trips.emplace_back(dofs[a], dofs[b], mass_local(a, b));
                const double stiff = area * grads[a].dot(W_avg * grads[b]);
                for (int i = 0; i < m; ++i) {
                    const double value = mass_local(a, b) +
                                         cfg.tau * cfg.diffusion[i] * stiff +
                                         cfg.tau * react_local[i](a, b);
                    sys_trips[i].emplace_back(dofs[a], dofs[b], value);
                }
            }
            for (int i = 0; i < m; ++i) loads[i][dofs[a]] += load_local[i][a];
        }
    }

    SparseOperator::Matrix mass_matrix(n_dof, n_dof);
    mass_matrix.setFromTriplets(mass_trips.begin(), mass_trips.end());
    SparseOperator M_new(std::move(mass_matrix));

    SystemState next;
    next.t = t_new;
    next.mesh_version = space.mesh_version();
    next.u.resize(m);
    for (int i = 0; i < m; ++i) {
        SparseOperator::Matrix A(n_dof, n_dof);
        A.setFromTriplets(sys_trips[i].begin(), sys_trips[i].end());
        const Eigen::VectorXd rhs = mass_prev->apply(prev.u[i]) + cfg.tau * loads[i];
        next.u[i] = solve_linear(SparseOperator(std::move(A)), rhs, cfg.solver);
    }

    if (mass_new) *mass_new = std::move(M_new);
    return next;
}

double domain_measure(const P1Space& space, const DomainMap& map, double t) {
    double total = 0.0;
    for (int e = 0; e < space.element_count(); ++e) {
        const double area = space.element_area(e);
        for (int q = 0; q < TriQuadrature::npoints; ++q)
            total += TriQuadrature::weights[q] * area * map.metric_terms(space.quad_point(e, q), t).J;
    }
    return total;
}

double state_distance(const P1Space& space, const SystemState& a, const SystemState& b) {
    if (a.mesh_version != b.mesh_version || a.species() != b.species())
        throw FemError("state_distance: states live on different meshes");
    double sum = 0.0;
    for (int i = 0; i < a.species(); ++i) {
        const Eigen::VectorXd d = a.u[i] - b.u[i];
        const auto dd = std::span<const double>(d.data(), d.size());
        for (int e = 0; e < space.element_count(); ++e) {
            const double area = space.element_area(e);
            for (int q = 0; q < TriQuadrature::npoints; ++q) {
                const double v = space.value_at(dd, e, q);
                sum += TriQuadrature::weights[q] * area * v * v;
            }
        }
    }
    return std::sqrt(sum);
}

RunResult run(const std::vector<std::function<double(const Vec2&)>>& initial,
              const ReferenceMesh& mesh0, const DomainMap& map, const KineticsModel& kinetics,
              const StepConfig& cfg, const AdaptConfig* adapt_cfg, const SourceFn& sources,
              const StepCallback& callback) {
    const int m = kinetics.species();
    if (static_cast<int>(initial.size()) != m)
        throw FemError("run: initial data does not match the species count");
    cfg.validate(m);

    const double steps_exact = cfg.t_final / cfg.tau;
    const long long n_steps = std::llround(steps_exact);
    if (n_steps < 1 || std::abs(steps_exact - double(n_steps)) > 1e-9 * steps_exact)
        throw FemError("run: t_final must be a positive integer multiple of tau");

    ReferenceMesh mesh = mesh0;
    P1Space space(mesh);
    SystemState state;
    state.t = 0.0;
    state.mesh_version = mesh.version();
    state.u.resize(m);
    for (int i = 0; i < m; ++i) state.u[i] = interpolant(space, initial[i]);

    RunResult result{std::move(mesh), std::move(state), {}};
    result.history.reserve(n_steps);

    SparseOperator mass_cache;
    bool mass_cache_valid = false;

    for (long long n = 1; n <= n_steps; ++n) {
        StepRecord rec;
        rec.step = static_cast<int>(n);

        if (adapt_cfg) {
            AdaptStepResult out = adapt_step(result.state, result.mesh, map, kinetics, cfg,
                                             *adapt_cfg, sources);
            rec.adapt_iterations = out.iterations;
            rec.cap_hit = out.cap_hit;
            rec.eta_global = out.field.global;
            P1Space out_space(out.mesh);
            rec.delta_u = state_distance(out_space, out.state, out.prev_state);
            rec.t = out.state.t;
            rec.dofs = out_space.dof_count();
            rec.domain_measure = domain_measure(out_space, map, out.state.t);
            result.mesh = std::move(out.mesh);
            result.state = std::move(out.state);
            if (callback) callback(rec, result.mesh, out_space, result.state, out.field);
            mass_cache_valid = false;
        } else {
            SparseOperator mass_new;
            SystemState next = step_cached(result.state, space, map, kinetics, cfg, sources,
                                           mass_cache_valid ? &mass_cache : nullptr, &mass_new);
            const IndicatorField field = compute_indicators(result.mesh, space, next, result.state,
                                                            cfg.tau, map, kinetics, cfg.diffusion,
                                                            sources);
            rec.t = next.t;
            rec.dofs = space.dof_count();
            rec.eta_global = field.global;
            rec.delta_u = state_distance(space, next, result.state);
            rec.domain_measure = domain_measure(space, map, next.t);
            result.state = std::move(next);
            mass_cache = std::move(mass_new);
            mass_cache_valid = true;
            if (callback) callback(rec, result.mesh, space, result.state, field);
        }

        result.history.push_back(rec);
    }
    return result;
}

}  // namespace rdafem
