#include "rdafem/bench.hpp"

#include <cmath>

namespace rdafem {

double effectivity(const ErrorRecord& record) {
    if (!(record.err_h1 > 0.0)) throw FemError("effectivity: zero energy error");
    return (record.estimator * record.estimator) / (record.err_h1 * record.err_h1);
}

std::vector<double> eoc(std::span<const double> values, std::span<const double> hs) {
    if (values.size() != hs.size() || values.size() < 2)
        throw FemError("eoc: need two sequences of equal length >= 2");
    std::vector<double> out;
    out.reserve(values.size() - 1);
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        if (!(values[k] > 0.0) || !(values[k + 1] > 0.0) || !(hs[k] > 0.0) || !(hs[k + 1] > 0.0))
            throw FemError("eoc: entries must be positive");
        out.push_back(std::log(values[k] / values[k + 1]) / std::log(hs[k] / hs[k + 1]));
    }
    return out;
}

ErrorAccumulator::ErrorAccumulator(const ManufacturedCase& mcase, const DomainMap& map)
    : case_(&mcase), map_(&map) {}

std::pair<double, double> ErrorAccumulator::instantaneous(const P1Space& space,
                                                          const SystemState& state) const {
    const int m = case_->species;
    double l2 = 0.0, h1 = 0.0;
    std::vector<Vec2> grad_h(m);
    for (int e = 0; e < space.element_count(); ++e) {
        const double area = space.element_area(e);
        for (int i = 0; i < m; ++i)
            grad_h[i] = space.gradient_on(
                std::span<const double>(state.u[i].data(), state.u[i].size()), e);
        for (int q = 0; q < TriQuadrature::npoints; ++q) {
            const Vec2& xi = space.quad_point(e, q);
            const MetricSample metric = map_->metric_terms(xi, state.t);
            const double wq = TriQuadrature::weights[q] * area * metric.J;
            for (int i = 0; i < m; ++i) {
                const double diff = space.value_at(std::span<const double>(state.u[i].data(),
                                                                           state.u[i].size()),
                                                   e, q) -
                                    case_->value(i, xi, state.t);
                l2 += wq * diff * diff;
                const Vec2 gdiff = grad_h[i] - case_->gradient(i, xi, state.t);
                h1 += case_->diffusion[i] * wq * (metric.K.transpose() * gdiff).squaredNorm();
            }
        }
    }
    return {l2, h1};
}

void ErrorAccumulator::add_state(const P1Space& space, const SystemState& state) {
    const auto [l2, h1] = instantaneous(space, state);
    if (have_prev_) {
        const double dt = state.t - prev_t_;
        int_l2_ += 0.5 * dt * (prev_l2_ + l2);
        int_h1_ += 0.5 * dt * (prev_h1_ + h1);
    }
    prev_t_ = state.t;
    prev_l2_ = l2;
    prev_h1_ = h1;
    have_prev_ = true;
}

void ErrorAccumulator::add_estimator(double eta_global, double tau) {
    int_eta_ += tau * eta_global * eta_global;
}

ErrorRecord ErrorAccumulator::record(double h, double tau) const {
    ErrorRecord r;
    r.h = h;
    r.tau = tau;
    r.err_l2 = std::sqrt(int_l2_);
    r.err_h1 = std::sqrt(int_h1_);
    r.estimator = std::sqrt(int_eta_);
    return r;
}

EocStudyResult run_eoc_study(const ManufacturedCase& mcase, const DomainMap& map,
                             std::span<const int> levels, double t_final,
                             const SolverConfig& solver) {
    EocStudyResult result;

    for (int n : levels) {
        const ReferenceMesh mesh = initial_mesh(n);
        const double tau = 0.5 / (double(n) * double(n));  // h^2/4 with h = sqrt(2)/n

        StepConfig cfg;
        cfg.tau = tau;
        cfg.t_final = t_final;
        cfg.diffusion = mcase.diffusion;
        cfg.solver = solver;

        SourceFn sources = [&mcase, &map](const Vec2& xi, double t) {
            return manufactured_source(mcase, map, xi, t);
        };
        std::vector<std::function<double(const Vec2&)>> initial;
        for (int i = 0; i < mcase.species; ++i)
            initial.push_back([&mcase, i](const Vec2& xi) { return mcase.value(i, xi, 0.0); });

        ErrorAccumulator acc(mcase, map);
        {
            // sample the interpolated initial state before stepping
            P1Space space(mesh);
            SystemState init;
            init.t = 0.0;
            init.mesh_version = mesh.version();
            for (int i = 0; i < mcase.species; ++i) init.u.push_back(interpolant(space, initial[i]));
            acc.add_state(space, init);
        }

        StepCallback cb = [&acc, tau](const StepRecord& rec, const ReferenceMesh&,
                                      const P1Space& space, const SystemState& state,
                                      const IndicatorField&) {
            acc.add_state(space, state);
            acc.add_estimator(rec.eta_global, tau);
        };
        run(initial, mesh, map, *mcase.kinetics, cfg, nullptr, sources, cb);

        double h = 0.0;
        for (int e = 0; e < mesh.element_count(); ++e)
            h = std::max(h, mesh.element_diameter(e));
        result.levels.push_back({n, acc.record(h, tau)});
    }

    std::vector<double> hs, etas, l2s, h1s;
    for (const auto& lv : result.levels) {
        hs.push_back(lv.record.h);
        etas.push_back(lv.record.estimator);
        l2s.push_back(lv.record.err_l2);
        h1s.push_back(lv.record.err_h1);
        result.effectivities.push_back(effectivity(lv.record));
    }
    if (result.levels.size() >= 2) {
        result.eoc_estimator = eoc(etas, hs);
        result.eoc_l2 = eoc(l2s, hs);
        result.eoc_h1 = eoc(h1s, hs);
    }
    return result;
}

}  // namespace rdafem
