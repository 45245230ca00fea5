#include "rdafem/fem.hpp"

#include <cmath>
#include <sstream>

namespace rdafem {

namespace {

double triangle_area(const std::array<Vec2, 3>& p) {
    return 0.5 * ((p[1].x() - p[0].x()) * (p[2].y() - p[0].y()) -
                  (p[2].x() - p[0].x()) * (p[1].y() - p[0].y()));
}

}  // namespace

std::array<Vec2, 3> p1_basis_gradients(const std::array<Vec2, 3>& tri) {
    const double two_area = 2.0 * triangle_area(tri);
    std::array<Vec2, 3> g;
    for (int k = 0; k < 3; ++k) {
        const Vec2 opposite = tri[(k + 2) % 3] - tri[(k + 1) % 3];
        g[k] = Vec2(-opposite.y(), opposite.x()) / two_area;
    }
    return g;
}

P1Space::P1Space(const ReferenceMesh& mesh) {
    mesh_version_ = mesh.version();
    vertices_.resize(mesh.vertex_count());
    for (int v = 0; v < mesh.vertex_count(); ++v) vertices_[v] = mesh.vertex(v);

    const int ne = mesh.element_count();
    dofs_.resize(ne);
    coords_.resize(ne);
    areas_.resize(ne);
    diameters_.resize(ne);
    grads_.resize(ne);
    qpoints_.resize(static_cast<std::size_t>(ne) * TriQuadrature::npoints);
    for (int e = 0; e < ne; ++e) {
        dofs_[e] = mesh.element(e);
        for (int k = 0; k < 3; ++k) coords_[e][k] = vertices_[dofs_[e][k]];
        areas_[e] = triangle_area(coords_[e]);
        diameters_[e] = mesh.element_diameter(e);
        grads_[e] = p1_basis_gradients(coords_[e]);
        for (int q = 0; q < TriQuadrature::npoints; ++q)
            qpoints_[e * TriQuadrature::npoints + q] = TriQuadrature::point(coords_[e], q);
    }
}

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (int k = 0; k < m_.outerSize(); ++k)
        for (Matrix::InnerIterator it(m_, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

double SparseOperator::max_asymmetry() const {
    Matrix diff = m_ - Matrix(m_.transpose());
    double m = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (Matrix::InnerIterator it(diff, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

Eigen::VectorXd interpolant(const P1Space& space, const std::function<double(const Vec2&)>& g) {
    Eigen::VectorXd c(space.dof_count());
    for (int v = 0; v < space.dof_count(); ++v) {
        const double val = g(space.vertex(v));
        if (!std::isfinite(val)) {
            std::ostringstream os;
            os << "interpolant: non-finite value at vertex " << v << " = (" << space.vertex(v).x()
               << ", " << space.vertex(v).y() << ")";
            throw FemError(os.str());
        }
        c[v] = val;
    }
    return c;
}

namespace {

using Triplet = Eigen::Triplet<double>;

SparseOperator from_triplets(int dim, const std::vector<Triplet>& trips) {
    SparseOperator::Matrix m(dim, dim);
    m.setFromTriplets(trips.begin(), trips.end());
    return SparseOperator(std::move(m));
}

}  // namespace

SparseOperator assemble_mass(const P1Space& space, const DomainMap& map, double t) {
    return assemble_mass_weighted(space, map, t, QuadFn{});
}

SparseOperator assemble_mass_weighted(const P1Space& space, const DomainMap& map, double t,
                                      const QuadFn& w) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(space.element_count()) * 9);
    for (int e = 0; e < space.element_count(); ++e) {
        const double area = space.element_area(e);
        Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
        for (int q = 0; q < TriQuadrature::npoints; ++q) {
            const Vec2& xi = space.quad_point(e, q);
            double f = map.metric_terms(xi, t).J;
            if (w) f *= w(e, q, xi);
            const double scale = TriQuadrature::weights[q] * area * f;
            const auto& l = TriQuadrature::bary[q];
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) local(a, b) += scale * l[a] * l[b];
        }
        const auto& d = space.element_dofs(e);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) trips.emplace_back(d[a], d[b], local(a, b));
    }
    return from_triplets(space.dof_count(), trips);
}

SparseOperator assemble_stiffness(const P1Space& space, const DomainMap& map, double t, double D) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(space.element_count()) * 9);
    for (int e = 0; e < space.element_count(); ++e) {
        const double area = space.element_area(e);
        const auto& g = space.basis_gradients(e);
        Mat2 W = Mat2::Zero();
        for (int q = 0; q < TriQuadrature::npoints; ++q) {
            const Vec2& xi = space.quad_point(e, q);
            W += TriQuadrature::weights[q] * map.metric_terms(xi, t).weight();
        }
        const auto& d = space.element_dofs(e);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                trips.emplace_back(d[a], d[b], D * area * g[a].dot(W * g[b]));
    }
    return from_triplets(space.dof_count(), trips);
}

Eigen::VectorXd assemble_load(const P1Space& space, const DomainMap& map, double t,
                              const QuadFn& f) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(space.dof_count());
    for (int e = 0; e < space.element_count(); ++e) {
        const double area = space.element_area(e);
        const auto& d = space.element_dofs(e);
        for (int q = 0; q < TriQuadrature::npoints; ++q) {
            const Vec2& xi = space.quad_point(e, q);
            const double J = map.metric_terms(xi, t).J;
            const double val = f(e, q, xi);
            if (!std::isfinite(val)) {
                std::ostringstream os;
                os << "load: non-finite integrand on element " << e << " at xi=(" << xi.x() << ", "
                   << xi.y() << ")";
                throw FemError(os.str());
            }
            const double scale = TriQuadrature::weights[q] * area * J * val;
            const auto& l = TriQuadrature::bary[q];
            for (int a = 0; a < 3; ++a) b[d[a]] += scale * l[a];
        }
    }
    return b;
}

Eigen::VectorXd assemble_load(const P1Space& space, const DomainMap& map, double t,
                              const std::function<double(const Vec2&)>& f) {
    return assemble_load(space, map, t, [&f](int, int, const Vec2& xi) { return f(xi); });
}

Eigen::Matrix3d p1_local_mass(const std::array<Vec2, 3>& tri,
                              const std::function<double(const Vec2&)>& jacobian) {
    const double area = triangle_area(tri);
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (int q = 0; q < TriQuadrature::npoints; ++q) {
        const double scale =
            TriQuadrature::weights[q] * area * jacobian(TriQuadrature::point(tri, q));
        const auto& l = TriQuadrature::bary[q];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) local(a, b) += scale * l[a] * l[b];
    }
    return local;
}

Eigen::Matrix3d p1_local_stiffness(const std::array<Vec2, 3>& tri,
                                   const std::function<Mat2(const Vec2&)>& weight) {
    const double area = triangle_area(tri);
    const auto g = p1_basis_gradients(tri);
    Mat2 W = Mat2::Zero();
    for (int q = 0; q < TriQuadrature::npoints; ++q)
        W += TriQuadrature::weights[q] * weight(TriQuadrature::point(tri, q));
    Eigen::Matrix3d local;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) local(a, b) = area * g[a].dot(W * g[b]);
    return local;
}

}  // namespace rdafem
