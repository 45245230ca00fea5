#pragma once

#include "rdafem/geometry.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>

namespace rdafem {

class KineticsError : public std::runtime_error {
public:
    explicit KineticsError(const std::string& what) : std::runtime_error(what) {}
};

/// Reaction terms f(u), their Jacobian, and the semi-implicit split used
/// by the time stepper. The split writes each species' reaction as
///
///   ftilde_i(u_new, u_prev) = g_i(u_prev) - c_i(u_prev) * u_new_i
///
/// with the consistency requirement g_i(u) - c_i(u) u_i = f_i(u), which
/// makes each species' implicit system linear in its own newest value.
///
/// Immutable after construction; concurrent reads are safe.
class KineticsModel {
public:
    struct Split {
        double c = 0.0;  // implicit coefficient
        double g = 0.0;  // explicit part
    };

    virtual ~KineticsModel() = default;
    virtual int species() const = 0;
    virtual void eval(std::span<const double> u, std::span<double> f) const = 0;
    virtual void jacobian(std::span<const double> u, Eigen::Ref<Eigen::MatrixXd> df) const = 0;
    virtual Split split(std::span<const double> u_prev, int i) const = 0;

    Eigen::VectorXd eval(const Eigen::VectorXd& u) const {
        Eigen::VectorXd f(species());
        eval(std::span<const double>(u.data(), u.size()), std::span<double>(f.data(), f.size()));
        return f;
    }
};

/// Schnakenberg kinetics f1 = gamma (k1 - u1 + u1^2 u2),
/// f2 = gamma (k2 - u1^2 u2); parameters must be positive.
std::unique_ptr<KineticsModel> schnakenberg(double gamma, double k1, double k2);

/// f = 0 for any species count; useful for pure-diffusion checks.
std::unique_ptr<KineticsModel> zero_kinetics(int species);

/// The positive Schnakenberg steady state (k1 + k2, k2 / (k1 + k2)^2).
Eigen::Vector2d schnakenberg_steady_state(double k1, double k2);

/// A smooth exact solution with analytic derivatives plus the kinetics it
/// is benchmarked against. The derived source makes the exact solution
/// solve the pullback system for a given domain map.
struct ManufacturedCase {
    int species = 0;
    std::function<double(int i, const Vec2& xi, double t)> value;
    std::function<double(int i, const Vec2& xi, double t)> time_derivative;
    std::function<Vec2(int i, const Vec2& xi, double t)> gradient;
    std::function<Mat2(int i, const Vec2& xi, double t)> hessian;
    std::shared_ptr<const KineticsModel> kinetics;
    Eigen::VectorXd diffusion;

    Eigen::VectorXd exact(const Vec2& xi, double t) const {
        Eigen::VectorXd u(species);
        for (int i = 0; i < species; ++i) u[i] = value(i, xi, t);
        return u;
    }
};

/// Source vector s(xi, t) such that the case's exact solution satisfies
/// d_t(J u_i) - D_i div(J K K^T grad u_i) = J (f_i(u) + s_i) under `map`.
Eigen::VectorXd manufactured_source(const ManufacturedCase& mcase, const DomainMap& map,
                                    const Vec2& xi, double t);

/// The benchmark solution u_i = exp(-t) cos(pi xi1) cos(pi xi2) + shift_i.
/// It satisfies the homogeneous Neumann condition on the reference square
/// for diagonal-K maps; `shift` is typically the kinetics steady state.
ManufacturedCase cosine_decay_case(std::shared_ptr<const KineticsModel> kinetics,
                                   Eigen::VectorXd diffusion, Eigen::VectorXd shift);

}  // namespace rdafem
