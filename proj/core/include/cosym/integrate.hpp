#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cosym/field.hpp"

namespace cosym {

enum class FieldKind { hamiltonian, gradient, evolution };

struct IntegratorConfig {
    enum class Method { rk4, rk45 };
    Method method = Method::rk45;
    double step = 1e-3;      // rk4 fixed step
    double abs_tol = 1e-10;  // rk45
    double rel_tol = 1e-10;  // rk45
    double max_step = 0.1;   // rk45
    std::size_t max_steps = 2'000'000;

    /// Optional guard; returning false at a state terminates the run as a
    /// domain error (e.g. minimum separation to a primary).
    std::function<bool(const Vec&)> guard;

    static IntegratorConfig rk4(double step) {
        IntegratorConfig c;
        c.method = Method::rk4;
        c.step = step;
        return c;
    }
    static IntegratorConfig rk45(double tol, double max_step = 0.1) {
        IntegratorConfig c;
        c.method = Method::rk45;
        c.abs_tol = tol;
        c.rel_tol = tol;
        c.max_step = max_step;
        return c;
    }
};

struct Trajectory {
    enum class Termination { completed, domain_error, step_underflow };

    std::vector<double> times;   // integration parameter s at accepted steps
    std::vector<Vec> states;     // matching states (2n+1 components)
    Termination termination = Termination::completed;
    Vec terminal_point;          // populated on domain_error
    std::string note;

    const Vec& front() const { return states.front(); }
    const Vec& back() const { return states.back(); }
    bool completed() const { return termination == Termination::completed; }
};

/// Right-hand side as a plain callable; s is the integration parameter.
using OdeFn = std::function<Vec(double s, const Vec& state)>;

/// Generic ODE driver shared by the chart-level integrators and the reduced
/// fields of the reduction checks.
Trajectory integrate_ode(const OdeFn& rhs, Vec x0, double s0, double s1,
                         const IntegratorConfig& cfg);

/// Integrate the chosen field kind of a generating function from the full
/// state x0 = (t, q, p) over s in [s0, s1]. For the evolution kind dt/ds = 1,
/// so s is time; for the Hamiltonian kind the t-component stays frozen.
Trajectory integrate(FieldKind kind, const ScalarField& f, const Vec& x0,
                     double s0, double s1, const IntegratorConfig& cfg);

/// Per-field drift along a trajectory: series of f(t_k, x_k) and the max
/// deviation from the initial value.
struct MonitorSeries {
    std::string name;
    std::vector<double> values;
    double max_drift = 0.0;
};

std::vector<MonitorSeries> monitor(const Trajectory& traj,
                                   const std::vector<ScalarField>& fields);

/// CSV export: header `s,t,<coords...>`, 17 significant digits.
std::string trajectory_csv(const Trajectory& traj, const DarbouxChart& chart);

} // namespace cosym
