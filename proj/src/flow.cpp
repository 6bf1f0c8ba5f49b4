#include "sympcal/flow.hpp"

#include <cmath>

#include "sympcal/errors.hpp"

namespace sympcal {

namespace {

struct State {
    Vec z;
    Mat jac;  // zero-size when not tracked
};

State rk4_run(const HamiltonianBase& h, Vec z0, double t0, double t1, bool with_jac,
              const FlowOptions& opt,
              const std::function<void(double, const State&)>& observer) {
    const int dim = h.dim();
    const Mat j0 = standard_j(h.n());
    const double span = t1 - t0;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) * opt.steps_per_unit)));
    const double dt = span / steps;

    State s;
    s.z = z0;
    if (with_jac) s.jac = Mat::Identity(dim, dim);
    if (observer) observer(t0, s);

    auto zdot = [&](double t, const Vec& z) -> Vec { return -(j0 * h.grad(t, z)); };
    auto jdot = [&](double t, const Vec& z, const Mat& jm) -> Mat {
        return -(j0 * (h.hess(t, z) * jm));
    };

    for (int i = 0; i < steps; ++i) {
        const double t = t0 + i * dt;
        const Vec k1 = zdot(t, s.z);
        const Vec k2 = zdot(t + dt / 2, s.z + dt / 2 * k1);
        const Vec k3 = zdot(t + dt / 2, s.z + dt / 2 * k2);
        const Vec k4 = zdot(t + dt, s.z + dt * k3);
        Vec znew = s.z + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        if (with_jac) {
            const Mat m1 = jdot(t, s.z, s.jac);
            const Mat m2 = jdot(t + dt / 2, s.z + dt / 2 * k1, s.jac + dt / 2 * m1);
            const Mat m3 = jdot(t + dt / 2, s.z + dt / 2 * k2, s.jac + dt / 2 * m2);
            const Mat m4 = jdot(t + dt, s.z + dt * k3, s.jac + dt * m3);
            s.jac += dt / 6.0 * (m1 + 2 * m2 + 2 * m3 + m4);
        }
        s.z = std::move(znew);
        if (!s.z.allFinite() || s.z.norm() > opt.blowup_radius)
            throw DivergenceError("flow: trajectory left the configured ball");
        if (observer) observer(t + dt, s);
    }
    return s;
}

} // namespace

Vec flow_point(const HamiltonianBase& h, const Vec& z0, double t0, double t1,
               const FlowOptions& opt) {
    return rk4_run(h, z0, t0, t1, false, opt, nullptr).z;
}

HamiltonianBase::PointJac HamiltonianBase::flow_between(double t0, double t1, const Vec& z) const {
    if (const auto f1 = closed_flow(t1)) {
        if (const auto f0 = closed_flow(t0)) {
            const Mat m = (*f1) * f0->inverse();
            return {m * z, m};
        }
    }
    const State s = rk4_run(*this, z, t0, t1, true, FlowOptions{}, nullptr);
    return {s.z, s.jac};
}

FlowJac flow_with_jacobian(const HamiltonianBase& h, const Vec& z0, double t0, double t1,
                           const FlowOptions& opt) {
    const State s = rk4_run(h, z0, t0, t1, true, opt, nullptr);
    return {s.z, s.jac};
}

Trajectory flow_trajectory(const HamiltonianBase& h, const Vec& z0, double t0, double t1,
                           bool with_jacobian, const FlowOptions& opt) {
    Trajectory traj;
    traj.t0 = t0;
    traj.t1 = t1;
    rk4_run(h, z0, t0, t1, with_jacobian, opt, [&](double t, const State& s) {
        traj.times.push_back(t);
        traj.z.push_back(s.z);
        if (with_jacobian) traj.jac.push_back(s.jac);
    });
    return traj;
}

double flow_error_estimate(const HamiltonianBase& h, const Vec& z0, double t0, double t1,
                           const FlowOptions& opt) {
    FlowOptions fine = opt;
    fine.steps_per_unit = 2 * opt.steps_per_unit;
    const Vec a = flow_point(h, z0, t0, t1, opt);
    const Vec b = flow_point(h, z0, t0, t1, fine);
    return (a - b).norm() / 15.0;  // RK4 Richardson factor
}

double action_of_trajectory(const HamiltonianBase& h, const Trajectory& traj) {
    const size_t count = traj.times.size();
    if (count < 3 || count % 2 == 0)
        throw DomainError("action_of_trajectory: need an even number of steps");
    const Mat j0 = standard_j(h.n());
    std::vector<double> f(count);
    for (size_t i = 0; i < count; ++i) {
        const double t = traj.times[i];
        const Vec& z = traj.z[i];
        const Vec zd = -(j0 * h.grad(t, z));
        f[i] = 0.5 * (j0 * zd).dot(z) - h.value(t, z);
    }
    const double dt = (traj.t1 - traj.t0) / static_cast<double>(count - 1);
    double acc = f.front() + f.back();
    for (size_t i = 1; i + 1 < count; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return acc * dt / 3.0;
}

double action(const HamiltonianBase& h, const Vec& z0, double closure_tol, const FlowOptions& opt) {
    const Trajectory traj = flow_trajectory(h, z0, 0.0, 1.0, false, opt);
    if ((traj.z.back() - z0).norm() > closure_tol * (1.0 + z0.norm()))
        throw OrbitError("action: trajectory does not close over one period");
    return action_of_trajectory(h, traj);
}

SymplecticPath linearized_path(const Trajectory& traj, int max_samples) {
    if (traj.jac.empty()) throw DomainError("linearized_path: trajectory lacks jacobians");
    const size_t count = traj.times.size();
    const size_t stride = std::max<size_t>(1, (count - 1) / static_cast<size_t>(max_samples));
    std::vector<double> ts;
    std::vector<Mat> ms;
    const double span = traj.t1 - traj.t0;
    for (size_t i = 0; i < count; i += stride) {
        ts.push_back((traj.times[i] - traj.t0) / span);
        ms.push_back(traj.jac[i]);
    }
    if (std::abs(ts.back() - 1.0) > 1e-12) {
        ts.push_back(1.0);
        ms.push_back(traj.jac.back());
    }
    return path_from_samples(std::move(ts), std::move(ms));
}

} // namespace sympcal
