#include "rdafem/geometry.hpp"

#include <cmath>
#include <sstream>

namespace rdafem {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSingularJ = 1e-14;

double growth(double amplitude, double period, double t) {
    return 1.0 + amplitude * std::sin(kPi * t / period);
}

double growth_rate(double amplitude, double period, double t) {
    return amplitude * (kPi / period) * std::cos(kPi * t / period);
}

std::string point_label(const Vec2& xi, double t) {
    std::ostringstream os;
    os << "xi=(" << xi.x() << ", " << xi.y() << "), t=" << t;
    return os.str();
}

}  // namespace

DomainMap DomainMap::identity(double t_final) {
    DomainMap m;
    m.kind_ = Kind::identity;
    m.t_final_ = t_final;
    return m;
}

DomainMap DomainMap::isotropic_dilation(double amplitude, double period, double t_final) {
    DomainMap m;
    m.kind_ = Kind::isotropic_dilation;
    m.t_final_ = t_final;
    m.amplitude_ = Vec2::Constant(amplitude);
    m.period_ = Vec2::Constant(period);
    return m;
}

DomainMap DomainMap::anisotropic_planar(const Vec2& amplitude, const Vec2& period, double t_final) {
    DomainMap m;
    m.kind_ = Kind::anisotropic_planar;
    m.t_final_ = t_final;
    m.amplitude_ = amplitude;
    m.period_ = period;
    return m;
}

DomainMap DomainMap::orthogonal_surface(double amplitude, double period, double t_final) {
    DomainMap m;
    m.kind_ = Kind::orthogonal_surface;
    m.ambient_dim_ = 3;
    m.t_final_ = t_final;
    m.amplitude_ = Vec2::Constant(amplitude);
    m.period_ = Vec2::Constant(period);
    return m;
}

DomainMap DomainMap::custom(CustomMap map, double t_final) {
    if (!map.eval) throw GeometryError("custom map requires an eval closure");
    if (map.ambient_dim != 2 && map.ambient_dim != 3)
        throw GeometryError("custom map ambient_dim must be 2 or 3");
    DomainMap m;
    m.kind_ = Kind::custom;
    m.ambient_dim_ = map.ambient_dim;
    m.t_final_ = t_final;
    m.custom_ = std::move(map);
    return m;
}

void DomainMap::check_time(double t) const {
    const double slack = 1e-9 * std::max(1.0, t_final_);
    if (t < -slack || t > t_final_ + slack) {
        std::ostringstream os;
        os << "time " << t << " outside the map horizon [0, " << t_final_ << "]";
        throw GeometryError(os.str());
    }
}

Vec3 DomainMap::map_eval(const Vec2& xi, double t) const {
    check_time(t);
    switch (kind_) {
        case Kind::identity:
            return {xi.x(), xi.y(), 0.0};
        case Kind::isotropic_dilation: {
            const double rho = growth(amplitude_.x(), period_.x(), t);
            return {rho * xi.x(), rho * xi.y(), 0.0};
        }
        case Kind::anisotropic_planar:
            return {growth(amplitude_.x(), period_.x(), t) * xi.x(),
                    growth(amplitude_.y(), period_.y(), t) * xi.y(), 0.0};
        case Kind::orthogonal_surface: {
            const double s = xi.x() - xi.y();
            const double h = amplitude_.x() * std::sin(kPi * t / period_.x()) * s * s * s * s;
            return {xi.x(), xi.y(), h};
        }
        case Kind::custom:
            return custom_.eval(xi, t);
    }
    throw GeometryError("unreachable map kind");
}

// Columns are d1 A and d2 A (3rd row zero for planar maps).
Eigen::Matrix<double, 3, 2> DomainMap::tangents(const Vec2& xi, double t) const {
    Eigen::Matrix<double, 3, 2> G = Eigen::Matrix<double, 3, 2>::Zero();
    switch (kind_) {
        case Kind::identity:
            G(0, 0) = 1.0;
            G(1, 1) = 1.0;
            return G;
        case Kind::isotropic_dilation: {
            const double rho = growth(amplitude_.x(), period_.x(), t);
            G(0, 0) = rho;
            G(1, 1) = rho;
            return G;
        }
        case Kind::anisotropic_planar:
            G(0, 0) = growth(amplitude_.x(), period_.x(), t);
            G(1, 1) = growth(amplitude_.y(), period_.y(), t);
            return G;
        case Kind::orthogonal_surface: {
            const double s = xi.x() - xi.y();
            const double g = amplitude_.x() * std::sin(kPi * t / period_.x());
            const double hs = 4.0 * g * s * s * s;  // dh/ds
            G(0, 0) = 1.0;
            G(1, 1) = 1.0;
            G(2, 0) = hs;
            G(2, 1) = -hs;
            return G;
        }
        case Kind::custom: {
            if (custom_.jacobian) return custom_.jacobian(xi, t);
            // centred differences, clamped inside the square is not needed:
            // custom maps are required to extend slightly past the boundary
            const double h = 1e-6;
            for (int k = 0; k < 2; ++k) {
                Vec2 p = xi, q = xi;
                p[k] += h;
                q[k] -= h;
                G.col(k) = (custom_.eval(p, t) - custom_.eval(q, t)) / (2.0 * h);
            }
            return G;
        }
    }
    throw GeometryError("unreachable map kind");
}

double DomainMap::jacobian_det_only(const Vec2& xi, double t) const {
    const auto G = tangents(xi, t);
    if (ambient_dim_ == 2) return G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0);
    return G.col(0).norm() * G.col(1).norm();
}

MetricSample DomainMap::metric_unchecked(const Vec2& xi, double t) const {
    MetricSample s;
    switch (kind_) {
        case Kind::identity:
            return s;
        case Kind::isotropic_dilation: {
            const double rho = growth(amplitude_.x(), period_.x(), t);
            const double drho = growth_rate(amplitude_.x(), period_.x(), t);
            s.K = Mat2::Identity() / rho;
            s.J = rho * rho;
            s.dJdt = 2.0 * rho * drho;
            return s;
        }
        case Kind::anisotropic_planar: {
            const double r1 = growth(amplitude_.x(), period_.x(), t);
            const double r2 = growth(amplitude_.y(), period_.y(), t);
            const double d1 = growth_rate(amplitude_.x(), period_.x(), t);
            const double d2 = growth_rate(amplitude_.y(), period_.y(), t);
            s.K = Vec2(1.0 / r1, 1.0 / r2).asDiagonal();
            s.J = r1 * r2;
            s.dJdt = d1 * r2 + r1 * d2;
            return s;
        }
        case Kind::orthogonal_surface: {
            const double ss = xi.x() - xi.y();
            const double gt = amplitude_.x() * std::sin(kPi * t / period_.x());
            const double dgt = amplitude_.x() * (kPi / period_.x()) * std::cos(kPi * t / period_.x());
            const double hs = 4.0 * gt * ss * ss * ss;
            const double dhs = 4.0 * dgt * ss * ss * ss;  // d/dt of dh/ds
            const double n1 = std::sqrt(1.0 + hs * hs);   // |d1 A| = |d2 A|
            const double dn1 = hs * dhs / n1;
            s.K = Mat2::Identity() / n1;
            s.J = n1 * n1;
            s.dJdt = 2.0 * n1 * dn1;
            return s;
        }
        case Kind::custom: {
            const auto G = tangents(xi, t);
            if (ambient_dim_ == 2) {
                Mat2 D;
                D << G(0, 0), G(0, 1), G(1, 0), G(1, 1);
                s.J = D.determinant();
                if (std::abs(s.J) > kSingularJ) s.K = D.inverse();
            } else {
                const double n1 = G.col(0).norm();
                const double n2 = G.col(1).norm();
                s.J = n1 * n2;
                if (s.J > kSingularJ) s.K = Vec2(1.0 / n1, 1.0 / n2).asDiagonal();
            }
            if (custom_.dJdt) {
                s.dJdt = custom_.dJdt(xi, t);
            } else {
                // 4th-order centred difference in t
                const double h = 1e-4 * std::max(1.0, t_final_);
                const double jp2 = jacobian_det_only(xi, t + 2 * h);
                const double jp1 = jacobian_det_only(xi, t + h);
                const double jm1 = jacobian_det_only(xi, t - h);
                const double jm2 = jacobian_det_only(xi, t - 2 * h);
                s.dJdt = (-jp2 + 8.0 * jp1 - 8.0 * jm1 + jm2) / (12.0 * h);
            }
            return s;
        }
    }
    throw GeometryError("unreachable map kind");
}

MetricSample DomainMap::metric_terms(const Vec2& xi, double t) const {
    check_time(t);
    MetricSample s = metric_unchecked(xi, t);
    if (!(s.J > kSingularJ)) {
        throw GeometryError("singular Jacobian (J=" + std::to_string(s.J) + ") at " +
                            point_label(xi, t));
    }
    return s;
}

double DomainMap::orthogonality_defect(const Vec2& xi, double t) const {
    check_time(t);
    const auto G = tangents(xi, t);
    const double n1 = G.col(0).norm();
    const double n2 = G.col(1).norm();
    if (n1 * n2 <= kSingularJ)
        throw GeometryError("degenerate tangents at " + point_label(xi, t));
    return std::abs(G.col(0).dot(G.col(1))) / (n1 * n2);
}

Vec2 DomainMap::metric_divergence(const Vec2& xi, double t) const {
    switch (kind_) {
        case Kind::identity:
        case Kind::isotropic_dilation:
        case Kind::anisotropic_planar:
            // W is spatially constant for these kinds
            return Vec2::Zero();
        case Kind::orthogonal_surface: {
            // W = diag(|e2|/|e1|, |e1|/|e2|) with |e1| = |e2| here, so W = I
            // pointwise and its divergence vanishes identically.
            return Vec2::Zero();
        }
        case Kind::custom: {
            check_time(t);
            const double h = 1e-6;
            Vec2 div = Vec2::Zero();
            for (int k = 0; k < 2; ++k) {
                Vec2 p = xi, q = xi;
                p[k] += h;
                q[k] -= h;
                const Mat2 Wp = metric_unchecked(p, t).weight();
                const Mat2 Wq = metric_unchecked(q, t).weight();
                const Mat2 dW = (Wp - Wq) / (2.0 * h);
                div[0] += dW(k, 0);
                div[1] += dW(k, 1);
            }
            return div;
        }
    }
    throw GeometryError("unreachable map kind");
}

}  // namespace rdafem
