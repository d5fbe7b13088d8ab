#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cosym/chart.hpp"
#include "cosym/jet.hpp"
#include "cosym/linalg.hpp"

namespace cosym {

/// Vector field value at a point, components in chart order (t first).
struct FieldValue {
    Vec components;

    double t_component() const { return components[0]; }
    std::size_t dim() const { return components.size(); }
    double operator[](std::size_t i) const { return components[i]; }

    /// Euclidean norm of all components.
    double norm() const { return cosym::norm(components); }
};

/// Scalar function on a Darboux chart, evaluated through second-order jet
/// arithmetic. The callable receives one Jet per coordinate (t first) and
/// must be deterministic and side-effect free. The jets may be seeded in any
/// outer variable space, so fields compose exactly (e.g. through a reduction
/// chart parametrization).
class ScalarField {
public:
    using JetFn = std::function<Jet(const std::vector<Jet>&)>;

    ScalarField() = default;
    ScalarField(DarbouxChart chart, std::string name, JetFn fn)
        : chart_(chart), name_(std::move(name)), fn_(std::move(fn)) {}

    const DarbouxChart& chart() const { return chart_; }
    const std::string& name() const { return name_; }
    bool valid() const { return static_cast<bool>(fn_); }

    /// Full second-order evaluation at a state (t, q, p), seeded in the
    /// chart's own coordinates. Throws DomainError on non-finite output.
    Jet2 eval(const Vec& state) const;

    /// Value only (still exact; jets of dimension 0).
    double value(const Vec& state) const;

    /// Evaluate on caller-seeded jets (composition entry point).
    Jet eval_jets(const std::vector<Jet>& coords) const;

    /// df/dt at the state; equals R f in Darboux coordinates.
    double time_derivative(const Vec& state) const;

    /// Spatial gradient (length 2n) at the state.
    Vec spatial_gradient(const Vec& state) const;

    /// Spatial 2n x 2n Hessian block at the state.
    Mat spatial_hessian(const Vec& state) const;

private:
    DarbouxChart chart_;
    std::string name_;
    JetFn fn_;
};

/// Wrap a black-box double-valued function as a ScalarField using central
/// finite differences, step = cbrt(machine epsilon) scaled per coordinate.
ScalarField fd_field(DarbouxChart chart, std::string name,
                     std::function<double(const Vec&)> f);

/// Linear combination  sum_i  c_i * f_i  (shared chart).
ScalarField linear_combination(const std::vector<double>& coeffs,
                               const std::vector<ScalarField>& fields,
                               std::string name);

/// Reeb field R = d/dt: components (1, 0, ..., 0).
FieldValue reeb(const DarbouxChart& chart, const Vec& state);

/// Hamiltonian field X_f: qdot^i = df/dp_i, pdot_i = -df/dq^i, tdot = 0.
FieldValue hamiltonian_field(const ScalarField& f, const Vec& state);

/// Gradient field  grad f = X_f + (Rf) R.
FieldValue gradient_field(const ScalarField& f, const Vec& state);

/// Evolution field  E_f = R + X_f  (t-component exactly 1).
FieldValue evolution_field(const ScalarField& f, const Vec& state);

/// Poisson bracket {f, g} = sum_i (df/dq^i dg/dp_i - df/dp_i dg/dq^i),
/// which equals omega(X_f, X_g).
double poisson_bracket(const ScalarField& f, const ScalarField& g,
                       const Vec& state);

/// Sharp of the Poisson bivector applied to a covector (chart order, length
/// 2n+1): the dt-component of the covector is dropped, the result has zero
/// t-component, and for df it reproduces the Hamiltonian field.
FieldValue bivector_apply(const DarbouxChart& chart, const Vec& covector,
                          const Vec& state);

/// Matrix of omega = sum dq^i ^ dp_i in chart order: omega(u, v) = u^T W v.
Mat omega_matrix(const DarbouxChart& chart);

/// Directional derivative of f along a field value at a state.
double directional_derivative(const ScalarField& f, const FieldValue& v,
                              const Vec& state);

/// Finite-difference Lie bracket [X, Y] of two field maps at a state
/// (central differences on the field components, step h).
FieldValue fd_lie_bracket(const std::function<FieldValue(const Vec&)>& x,
                          const std::function<FieldValue(const Vec&)>& y,
                          const Vec& state, double h = 1e-5);

/// Report of the symplectization consistency check on the product R x M
/// with the two-form pr*omega + ds ^ pr*eta: the bracket of pullbacks must
/// match the pullback of the cosymplectic bracket at each sample.
struct SymplectizationReport {
    double max_bracket_residual = 0.0;
    double min_abs_det = 0.0; // of the symplectization two-form matrix
    bool pass = false;
    std::size_t samples = 0;
};

/// sample_points: rows (s, t, q, p) of length dim+1.
SymplectizationReport symplectization_check(const ScalarField& f,
                                            const ScalarField& g,
                                            const std::vector<Vec>& sample_points,
                                            double tol);

} // namespace cosym
