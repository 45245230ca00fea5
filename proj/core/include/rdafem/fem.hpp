#pragma once

#include "rdafem/geometry.hpp"
#include "rdafem/mesh.hpp"
#include "rdafem/quadrature.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <span>
#include <vector>

namespace rdafem {

class FemError : public std::runtime_error {
public:
    explicit FemError(const std::string& what) : std::runtime_error(what) {}
};

/// Continuous piecewise-linear Lagrange space on a ReferenceMesh. One dof
/// per vertex. The space snapshots the element geometry (coordinates,
/// areas, basis gradients, quadrature points) so that assembly does not
/// depend on the mesh object's lifetime; it stays tied to the mesh through
/// the version stamp.
class P1Space {
public:
    explicit P1Space(const ReferenceMesh& mesh);

    std::uint64_t mesh_version() const { return mesh_version_; }
    int dof_count() const { return static_cast<int>(vertices_.size()); }
    int element_count() const { return static_cast<int>(dofs_.size()); }

    const std::array<int, 3>& element_dofs(int e) const { return dofs_[e]; }
    const std::array<Vec2, 3>& element_coords(int e) const { return coords_[e]; }
    double element_area(int e) const { return areas_[e]; }
    double element_diameter(int e) const { return diameters_[e]; }
    /// Constant gradients of the three local basis functions.
    const std::array<Vec2, 3>& basis_gradients(int e) const { return grads_[e]; }
    /// Reference coordinates of quadrature point q of element e.
    const Vec2& quad_point(int e, int q) const { return qpoints_[e * TriQuadrature::npoints + q]; }
    const Vec2& vertex(int v) const { return vertices_[v]; }

    /// P1 function value at quadrature point (e, q).
    double value_at(std::span<const double> coeffs, int e, int q) const {
        const auto& d = dofs_[e];
        const auto& l = TriQuadrature::bary[q];
        return l[0] * coeffs[d[0]] + l[1] * coeffs[d[1]] + l[2] * coeffs[d[2]];
    }
    /// Constant gradient of a P1 function on element e.
    Vec2 gradient_on(std::span<const double> coeffs, int e) const {
        const auto& d = dofs_[e];
        const auto& g = grads_[e];
        return coeffs[d[0]] * g[0] + coeffs[d[1]] * g[1] + coeffs[d[2]] * g[2];
    }

private:
    std::uint64_t mesh_version_ = 0;
    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> dofs_;
    std::vector<std::array<Vec2, 3>> coords_;
    std::vector<double> areas_;
    std::vector<double> diameters_;
    std::vector<std::array<Vec2, 3>> grads_;
    std::vector<Vec2> qpoints_;
};

/// Per-species P1 coefficient vectors at one time level, bound to a mesh
/// version.
struct SystemState {
    double t = 0.0;
    std::vector<Eigen::VectorXd> u;
    std::uint64_t mesh_version = 0;

    int species() const { return static_cast<int>(u.size()); }
};

/// Square sparse matrix in compressed-row form.
class SparseOperator {
public:
    using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    SparseOperator() = default;
    explicit SparseOperator(Matrix m) : m_(std::move(m)) {}

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    Matrix& matrix() { return m_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return m_ * x; }
    double coeff(int r, int c) const { return m_.coeff(r, c); }
    double max_abs() const;
    /// max |A - A^T| entrywise, for the symmetry invariant.
    double max_asymmetry() const;

private:
    Matrix m_;
};

/// Value/weight sampled per quadrature point; many callers only need xi,
/// assembly-internal callers get the (element, point) pair as well.
using QuadFn = std::function<double(int e, int q, const Vec2& xi)>;

/// Lagrange interpolant: coefficient at each dof is g at the vertex.
/// Throws FemError (naming the vertex) when g is not finite there.
Eigen::VectorXd interpolant(const P1Space& space, const std::function<double(const Vec2&)>& g);

/// M[a,b] = int J(xi,t) phi_a phi_b dxi.
SparseOperator assemble_mass(const P1Space& space, const DomainMap& map, double t);

/// M[a,b] = int J(xi,t) w(xi) phi_a phi_b dxi (w sampled per quad point).
SparseOperator assemble_mass_weighted(const P1Space& space, const DomainMap& map, double t,
                                      const QuadFn& w);

/// S[a,b] = int D J (K^T grad phi_a) . (K^T grad phi_b) dxi.
SparseOperator assemble_stiffness(const P1Space& space, const DomainMap& map, double t, double D);

/// b[a] = int J f phi_a dxi.
Eigen::VectorXd assemble_load(const P1Space& space, const DomainMap& map, double t,
                              const QuadFn& f);
Eigen::VectorXd assemble_load(const P1Space& space, const DomainMap& map, double t,
                              const std::function<double(const Vec2&)>& f);

/// Local 3x3 mass matrix on an explicit triangle with a pointwise Jacobian
/// weight: area-exact for the degree-4 rule.
Eigen::Matrix3d p1_local_mass(const std::array<Vec2, 3>& tri,
                              const std::function<double(const Vec2&)>& jacobian);

/// Local 3x3 stiffness matrix grad^T W grad with a pointwise matrix weight
/// W (typically J K K^T scaled by the diffusion coefficient).
Eigen::Matrix3d p1_local_stiffness(const std::array<Vec2, 3>& tri,
                                   const std::function<Mat2(const Vec2&)>& weight);

/// Basis gradients of the P1 element on an explicit triangle.
std::array<Vec2, 3> p1_basis_gradients(const std::array<Vec2, 3>& tri);

}  // namespace rdafem
