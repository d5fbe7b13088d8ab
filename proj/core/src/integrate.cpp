#include "cosym/integrate.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>

namespace cosym {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Embedded 4th-order weights.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

Vec combine(const Vec& x, double h, std::initializer_list<std::pair<double, const Vec*>> ks) {
    Vec y = x;
    for (const auto& [w, k] : ks)
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += h * w * (*k)[i];
    return y;
}

struct StepGuardFail {
    Vec point;
};

} // namespace

Trajectory integrate_ode(const OdeFn& rhs, Vec x0, double s0, double s1,
                         const IntegratorConfig& cfg) {
    if (cfg.step <= 0.0 || cfg.abs_tol <= 0.0 || cfg.rel_tol <= 0.0 ||
        cfg.max_step <= 0.0)
        throw Error("integrator config: step and tolerances must be positive");
    Trajectory traj;
    traj.times.push_back(s0);
    traj.states.push_back(x0);
    if (s1 <= s0) {
        traj.note = "empty window";
        return traj;
    }

    auto eval = [&](double s, const Vec& x) -> Vec {
        if (cfg.guard && !cfg.guard(x)) throw StepGuardFail{x};
        return rhs(s, x);
    };

    try {
        if (cfg.method == IntegratorConfig::Method::rk4) {
            const double h0 = cfg.step;
            double s = s0;
            Vec x = x0;
            while (s < s1 - 1e-15 * std::max(1.0, std::abs(s1))) {
                const double h = std::min(h0, s1 - s);
                const Vec k1 = eval(s, x);
                const Vec k2 = eval(s + h / 2, combine(x, h, {{0.5, &k1}}));
                const Vec k3 = eval(s + h / 2, combine(x, h, {{0.5, &k2}}));
                const Vec k4 = eval(s + h, combine(x, h, {{1.0, &k3}}));
                for (std::size_t i = 0; i < x.size(); ++i)
                    x[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
                s += h;
                traj.times.push_back(s);
                traj.states.push_back(x);
                if (traj.times.size() > cfg.max_steps) {
                    traj.note = "max step count reached";
                    break;
                }
            }
            return traj;
        }

        // rk45: Dormand-Prince with PI step-size control.
        double s = s0;
        Vec x = x0;
        double h = std::min(cfg.max_step, (s1 - s0) / 10.0);
        double err_prev = 1.0;
        Vec k1 = eval(s, x);
        std::size_t steps = 0;
        while (s < s1 - 1e-15 * std::max(1.0, std::abs(s1))) {
            h = std::min(h, s1 - s);
            if (h < 1e-14) {
                traj.termination = Trajectory::Termination::step_underflow;
                traj.note = "adaptive step below 1e-14";
                return traj;
            }
            bool rejected = false;
            Vec k2, k3, k4, k5, k6, k7, x5;
            double err = 0.0;
            try {
                k2 = eval(s + c2 * h, combine(x, h, {{a21, &k1}}));
                k3 = eval(s + c3 * h, combine(x, h, {{a31, &k1}, {a32, &k2}}));
                k4 = eval(s + c4 * h,
                          combine(x, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
                k5 = eval(s + c5 * h, combine(x, h, {{a51, &k1}, {a52, &k2},
                                                     {a53, &k3}, {a54, &k4}}));
                k6 = eval(s + h, combine(x, h, {{a61, &k1}, {a62, &k2},
                                                {a63, &k3}, {a64, &k4},
                                                {a65, &k5}}));
                x5 = combine(x, h, {{b1, &k1}, {b3, &k3}, {b4, &k4},
                                    {b5, &k5}, {b6, &k6}});
                k7 = eval(s + h, x5); // FSAL
                const Vec x4 = combine(x, h, {{e1, &k1}, {e3, &k3}, {e4, &k4},
                                              {e5, &k5}, {e6, &k6}, {e7, &k7}});
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const double sc =
                        cfg.abs_tol +
                        cfg.rel_tol * std::max(std::abs(x[i]), std::abs(x5[i]));
                    const double d = (x5[i] - x4[i]) / sc;
                    err += d * d;
                }
                err = std::sqrt(err / x.size());
            } catch (const DomainError&) {
                rejected = true; // stage left the domain: retry smaller
            } catch (const StepGuardFail&) {
                rejected = true;
            }

            if (!rejected && err <= 1.0) {
                s += h;
                x = x5;
                k1 = k7;
                traj.times.push_back(s);
                traj.states.push_back(x);
                const double grow =
                    0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                    std::pow(err_prev, 0.4 / 5.0);
                h = std::min({h * std::clamp(grow, 0.2, 5.0), cfg.max_step});
                err_prev = std::max(err, 1e-10);
                if (++steps > cfg.max_steps) {
                    traj.note = "max step count reached";
                    break;
                }
            } else {
                if (rejected) {
                    h *= 0.25;
                    // A rejected stage at vanishing h means the solution is
                    // running into a genuine domain boundary.
                    if (h < 1e-14) {
                        traj.termination = Trajectory::Termination::domain_error;
                        traj.terminal_point = x;
                        traj.note = "domain boundary reached";
                        return traj;
                    }
                } else {
                    const double shrink =
                        std::max(0.1, 0.9 * std::pow(err, -1.0 / 5.0));
                    h *= shrink;
                }
            }
        }
        return traj;
    } catch (const DomainError& e) {
        traj.termination = Trajectory::Termination::domain_error;
        traj.terminal_point = e.point();
        traj.note = e.what();
        return traj;
    } catch (const StepGuardFail& g) {
        traj.termination = Trajectory::Termination::domain_error;
        traj.terminal_point = g.point;
        traj.note = "separation guard triggered";
        return traj;
    }
}

Trajectory integrate(FieldKind kind, const ScalarField& f, const Vec& x0,
                     double s0, double s1, const IntegratorConfig& cfg) {
    f.chart().check_point(x0.size());
    OdeFn rhs = [kind, &f](double, const Vec& x) -> Vec {
        switch (kind) {
        case FieldKind::hamiltonian: return hamiltonian_field(f, x).components;
        case FieldKind::gradient: return gradient_field(f, x).components;
        case FieldKind::evolution: return evolution_field(f, x).components;
        }
        return {};
    };
    return integrate_ode(rhs, x0, s0, s1, cfg);
}

std::vector<MonitorSeries> monitor(const Trajectory& traj,
                                   const std::vector<ScalarField>& fields) {
    std::vector<MonitorSeries> out;
    out.reserve(fields.size());
    for (const auto& f : fields) {
        MonitorSeries series;
        series.name = f.name();
        series.values.reserve(traj.states.size());
        for (const auto& x : traj.states) {
            try {
                series.values.push_back(f.value(x));
            } catch (const DomainError&) {
                series.values.push_back(
                    std::numeric_limits<double>::quiet_NaN());
            }
        }
        const double v0 = series.values.empty() ? 0.0 : series.values.front();
        for (double v : series.values)
            if (std::isfinite(v) && std::isfinite(v0))
                series.max_drift = std::max(series.max_drift, std::abs(v - v0));
        out.push_back(std::move(series));
    }
    return out;
}

std::string trajectory_csv(const Trajectory& traj, const DarbouxChart& chart) {
    std::ostringstream os;
    os.precision(17);
    os << "s,t";
    for (std::size_t k = 1; k < chart.dim(); ++k) os << "," << chart.label(k);
    os << "\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << traj.times[i];
        for (double v : traj.states[i]) os << "," << v;
        os << "\n";
    }
    return os.str();
}

} // namespace cosym
