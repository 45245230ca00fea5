#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

namespace rdafem {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

/// Raised when the domain map degenerates (singular Jacobian) or is
/// evaluated outside its time horizon.
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Pointwise metric data of the pullback formulation: the matrix K
/// (inverse Jacobian for planar maps, diagonal tangent-length metric for
/// orthogonally parameterised surfaces), the Jacobian determinant J and
/// its time derivative.
struct MetricSample {
    Mat2 K = Mat2::Identity();
    double J = 1.0;
    double dJdt = 0.0;

    /// The diffusion weight J*K*K^T appearing in the weak form and the
    /// strong residual.
    Mat2 weight() const { return J * K * K.transpose(); }
};

/// Time-dependent map A(xi, t) from the reference square [0,1]^2 into the
/// physical domain (planar) or onto a surface embedded in R^3.
///
/// Built-in kinds cover the identity, isotropic/anisotropic sinusoidal
/// dilations A = rho(t)*xi with rho(t) = 1 + amplitude*sin(pi t/period),
/// and graph surfaces A = (xi1, xi2, a*sin(pi t/period)*(xi1-xi2)^4).
/// Arbitrary maps are supported through user closures with
/// finite-difference fallbacks for the derivatives.
///
/// Immutable after construction; safe for concurrent reads.
class DomainMap {
public:
    enum class Kind {
        identity,
        isotropic_dilation,
        anisotropic_planar,
        orthogonal_surface,
        custom,
    };

    /// User-supplied map. `eval` is required and must be smoothly
    /// evaluable in a small neighbourhood of [0,1]^2 x [0,T] (derivative
    /// stencils may poke slightly outside). `jacobian` (ambient_dim x 2)
    /// and `dJdt` are optional; missing derivatives fall back to finite
    /// differences.
    struct CustomMap {
        int ambient_dim = 2;
        std::function<Vec3(const Vec2&, double)> eval;
        std::function<Eigen::Matrix<double, 3, 2>(const Vec2&, double)> jacobian;
        std::function<double(const Vec2&, double)> dJdt;
    };

    static DomainMap identity(double t_final = 1.0);
    static DomainMap isotropic_dilation(double amplitude, double period, double t_final);
    static DomainMap anisotropic_planar(const Vec2& amplitude, const Vec2& period, double t_final);
    static DomainMap orthogonal_surface(double amplitude, double period, double t_final);
    static DomainMap custom(CustomMap map, double t_final);

    Kind kind() const { return kind_; }
    /// 2 for planar maps, 3 for surfaces.
    int ambient_dimension() const { return ambient_dim_; }
    double t_final() const { return t_final_; }

    /// A(xi, t). Planar maps return z = 0.
    Vec3 map_eval(const Vec2& xi, double t) const;

    /// K, J, dJ/dt at (xi, t). Throws GeometryError when J <= 1e-14.
    MetricSample metric_terms(const Vec2& xi, double t) const;

    /// |d1A . d2A| / (|d1A| |d2A|): deviation of the parameterisation from
    /// orthogonality. Diagnostic only; the surface metric of metric_terms
    /// assumes an orthogonal parameterisation regardless.
    double orthogonality_defect(const Vec2& xi, double t) const;

    /// Column divergence of W = J*K*K^T: component j is d1 W_1j + d2 W_2j.
    /// Zero in closed form for the planar built-ins; centred finite
    /// differences (step 1e-6) otherwise.
    Vec2 metric_divergence(const Vec2& xi, double t) const;

private:
    DomainMap() = default;

    void check_time(double t) const;
    Eigen::Matrix<double, 3, 2> tangents(const Vec2& xi, double t) const;
    MetricSample metric_unchecked(const Vec2& xi, double t) const;
    double jacobian_det_only(const Vec2& xi, double t) const;

    Kind kind_ = Kind::identity;
    int ambient_dim_ = 2;
    double t_final_ = 1.0;
    // sinusoidal growth parameters; y-components used by the anisotropic kind
    Vec2 amplitude_ = Vec2::Zero();
    Vec2 period_ = Vec2::Ones();
    CustomMap custom_;
};

}  // namespace rdafem
