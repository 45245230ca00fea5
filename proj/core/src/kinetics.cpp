#include "rdafem/kinetics.hpp"

#include <cmath>

namespace rdafem {

namespace {

constexpr double kPi = 3.14159265358979323846;

class Schnakenberg final : public KineticsModel {
public:
    Schnakenberg(double gamma, double k1, double k2) : gamma_(gamma), k1_(k1), k2_(k2) {}

    int species() const override { return 2; }

    void eval(std::span<const double> u, std::span<double> f) const override {
        const double cubic = u[0] * u[0] * u[1];
        f[0] = gamma_ * (k1_ - u[0] + cubic);
        f[1] = gamma_ * (k2_ - cubic);
    }

    void jacobian(std::span<const double> u, Eigen::Ref<Eigen::MatrixXd> df) const override {
        df(0, 0) = gamma_ * (-1.0 + 2.0 * u[0] * u[1]);
        df(0, 1) = gamma_ * u[0] * u[0];
        df(1, 0) = -2.0 * gamma_ * u[0] * u[1];
        df(1, 1) = -gamma_ * u[0] * u[0];
    }

    Split split(std::span<const double> u_prev, int i) const override {
        if (i == 0) return {gamma_ * (1.0 - u_prev[0] * u_prev[1]), gamma_ * k1_};
        return {gamma_ * u_prev[0] * u_prev[0], gamma_ * k2_};
    }

private:
    double gamma_, k1_, k2_;
};

class ZeroKinetics final : public KineticsModel {
public:
    explicit ZeroKinetics(int m) : m_(m) {}
    int species() const override { return m_; }
    void eval(std::span<const double>, std::span<double> f) const override {
        for (auto& v : f) v = 0.0;
    }
    void jacobian(std::span<const double>, Eigen::Ref<Eigen::MatrixXd> df) const override {
        df.setZero();
    }
    Split split(std::span<const double>, int) const override { return {0.0, 0.0}; }

private:
    int m_;
};

}  // namespace

std::unique_ptr<KineticsModel> schnakenberg(double gamma, double k1, double k2) {
    if (!(gamma > 0.0) || !(k1 > 0.0) || !(k2 > 0.0))
        throw KineticsError("schnakenberg: gamma, k1, k2 must be positive");
    return std::make_unique<Schnakenberg>(gamma, k1, k2);
}

std::unique_ptr<KineticsModel> zero_kinetics(int species) {
    if (species < 1) throw KineticsError("zero_kinetics: species count must be >= 1");
    return std::make_unique<ZeroKinetics>(species);
}

Eigen::Vector2d schnakenberg_steady_state(double k1, double k2) {
    const double s = k1 + k2;
    return {s, k2 / (s * s)};
}

Eigen::VectorXd manufactured_source(const ManufacturedCase& mcase, const DomainMap& map,
                                    const Vec2& xi, double t) {
    const MetricSample metric = map.metric_terms(xi, t);
    const Mat2 W = metric.weight();
    const Vec2 divW = map.metric_divergence(xi, t);

    const Eigen::VectorXd u = mcase.exact(xi, t);
    Eigen::VectorXd f(mcase.species);
    mcase.kinetics->eval(std::span<const double>(u.data(), u.size()),
                         std::span<double>(f.data(), f.size()));

    Eigen::VectorXd s(mcase.species);
    for (int i = 0; i < mcase.species; ++i) {
        const double dudt = mcase.time_derivative(i, xi, t);
        const Vec2 grad = mcase.gradient(i, xi, t);
        const Mat2 hess = mcase.hessian(i, xi, t);
        // div(W grad u) = (div W) . grad u + W : hess u
        const double diff = divW.dot(grad) + (W.array() * hess.array()).sum();
        s[i] = (metric.dJdt / metric.J) * u[i] + dudt - (mcase.diffusion[i] / metric.J) * diff -
               f[i];
    }
    return s;
}

ManufacturedCase cosine_decay_case(std::shared_ptr<const KineticsModel> kinetics,
                                   Eigen::VectorXd diffusion, Eigen::VectorXd shift) {
    ManufacturedCase c;
    c.species = kinetics->species();
    c.kinetics = std::move(kinetics);
    c.diffusion = std::move(diffusion);

    auto shape = [](const Vec2& xi) { return std::cos(kPi * xi.x()) * std::cos(kPi * xi.y()); };
    c.value = [shape, shift](int i, const Vec2& xi, double t) {
        return std::exp(-t) * shape(xi) + shift[i];
    };
    c.time_derivative = [shape](int, const Vec2& xi, double t) {
        return -std::exp(-t) * shape(xi);
    };
    c.gradient = [](int, const Vec2& xi, double t) {
        const double a = std::exp(-t);
        return Vec2(-kPi * a * std::sin(kPi * xi.x()) * std::cos(kPi * xi.y()),
                    -kPi * a * std::cos(kPi * xi.x()) * std::sin(kPi * xi.y()));
    };
    c.hessian = [](int, const Vec2& xi, double t) {
        const double a = std::exp(-t);
        const double cc = std::cos(kPi * xi.x()) * std::cos(kPi * xi.y());
        const double ss = std::sin(kPi * xi.x()) * std::sin(kPi * xi.y());
        Mat2 h;
        h(0, 0) = -kPi * kPi * a * cc;
        h(1, 1) = -kPi * kPi * a * cc;
        h(0, 1) = h(1, 0) = kPi * kPi * a * ss;
        return h;
    };
    return c;
}

}  // namespace rdafem
