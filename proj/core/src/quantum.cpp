#include "cosym/quantum.hpp"

#include <algorithm>
#include <cmath>

namespace cosym {

std::vector<Complex> CMatrix::apply(const std::vector<Complex>& psi) const {
    std::vector<Complex> out(n, Complex(0, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i] += (*this)(i, j) * psi[j];
    return out;
}

double CMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            worst = std::max(worst,
                             std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1, 0);
    return m;
}

CMatrix pauli_s(std::size_t j) {
    CMatrix s(2);
    switch (j) {
    case 1:
        s(0, 1) = Complex(0.5, 0);
        s(1, 0) = Complex(0.5, 0);
        break;
    case 2:
        s(0, 1) = Complex(0, -0.5);
        s(1, 0) = Complex(0, 0.5);
        break;
    case 3:
        s(0, 0) = Complex(0.5, 0);
        s(1, 1) = Complex(-0.5, 0);
        break;
    default: throw Error("pauli_s: j must be 1, 2, or 3");
    }
    return s;
}

CMatrix identity2() { return CMatrix::identity(2); }

double Envelope::operator()(double t) const {
    switch (kind) {
    case Kind::constant: return 1.0;
    case Kind::one_plus_sin: return 1.0 + a * std::sin(b * t);
    case Kind::exp_decay: return std::exp(-a * t);
    }
    return 1.0;
}

Jet Envelope::eval(const Jet& t) const {
    switch (kind) {
    case Kind::constant: return Jet(1.0, t.dim());
    case Kind::one_plus_sin: return 1.0 + a * sin(t * b);
    case Kind::exp_decay: return exp(t * (-a));
    }
    return Jet(1.0, t.dim());
}

std::string Envelope::describe() const {
    switch (kind) {
    case Kind::constant: return "constant";
    case Kind::one_plus_sin:
        return "1+" + std::to_string(a) + "*sin(" + std::to_string(b) + "t)";
    case Kind::exp_decay: return "exp(-" + std::to_string(a) + "t)";
    }
    return "constant";
}

HermitianPath HermitianPath::from_base(CMatrix base, Envelope env) {
    if (base.hermiticity_defect() > 1e-12)
        throw Error("HermitianPath: base matrix is not Hermitian");
    HermitianPath p;
    p.n = base.n;
    p.base = base;
    p.envelope = env;
    p.separable = true;
    p.matrix_at = [base, env](double t) {
        CMatrix m = base;
        const double s = env(t);
        for (auto& v : m.a) v *= s;
        return m;
    };
    return p;
}

HermitianPath HermitianPath::free_form(std::size_t n,
                                       std::function<CMatrix(double)> fn) {
    HermitianPath p;
    p.n = n;
    p.separable = false;
    p.matrix_at = std::move(fn);
    return p;
}

HermitianPath two_level_path(double b0, double b1, double b2, double b3,
                             Envelope env) {
    CMatrix base(2);
    const CMatrix i2 = identity2();
    const CMatrix s1 = pauli_s(1), s2 = pauli_s(2), s3 = pauli_s(3);
    for (std::size_t k = 0; k < 4; ++k)
        base.a[k] = b0 * i2.a[k] + b1 * s1.a[k] + b2 * s2.a[k] + b3 * s3.a[k];
    return HermitianPath::from_base(base, env);
}

DarbouxChart quantum_chart(std::size_t n) {
    return DarbouxChart{n, "quantum" + std::to_string(n)};
}

Vec quantum_state(double t, const std::vector<Complex>& psi) {
    const std::size_t n = psi.size();
    Vec x(2 * n + 1, 0.0);
    x[0] = t;
    for (std::size_t j = 0; j < n; ++j) {
        x[1 + j] = psi[j].real();
        x[1 + n + j] = psi[j].imag();
    }
    return x;
}

std::vector<Complex> psi_from_state(const Vec& state) {
    const std::size_t n = (state.size() - 1) / 2;
    std::vector<Complex> psi(n);
    for (std::size_t j = 0; j < n; ++j)
        psi[j] = Complex(state[1 + j], state[1 + n + j]);
    return psi;
}

ScalarField observable_field(const CMatrix& a, const std::string& name) {
    if (a.hermiticity_defect() > 1e-12)
        throw Error("observable_field: matrix is not Hermitian");
    const std::size_t n = a.n;
    const DarbouxChart chart = quantum_chart(n);
    // (1/2)<psi, A psi> = (1/2)[ R_jk (q_j q_k + p_j p_k) - 2 I_jk q_j p_k ]
    // with A = R + iI, R symmetric, I antisymmetric.
    auto fn = [a, n](const std::vector<Jet>& c) -> Jet {
        Jet out(0.0, c[0].dim());
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                const double re = a(j, k).real(), im = a(j, k).imag();
                const Jet& qj = c[1 + j];
                const Jet& qk = c[1 + k];
                const Jet& pj = c[1 + n + j];
                const Jet& pk = c[1 + n + k];
                if (re != 0.0) out += 0.5 * re * (qj * qk + pj * pk);
                if (im != 0.0) out += -im * (qj * pk);
            }
        }
        return out;
    };
    return ScalarField(chart, name, fn);
}

ScalarField schrodinger_field(const HermitianPath& path) {
    if (!path.separable)
        throw Error("schrodinger_field needs a separable (envelope * base) "
                    "path for exact jets");
    const ScalarField base =
        observable_field(path.base, "f_base");
    const Envelope env = path.envelope;
    const std::size_t n = path.n;
    auto fn = [base, env](const std::vector<Jet>& c) -> Jet {
        return env.eval(c[0]) * base.eval_jets(c);
    };
    return ScalarField(quantum_chart(n),
                       "h_schrodinger[" + env.describe() + "]", fn);
}

SymmetryAction u1_action(std::size_t n) {
    SymmetryAction action;
    action.algebra = LieAlgebraSpec::abelian(1);
    const DarbouxChart chart = quantum_chart(n);
    auto fn = [n](const std::vector<Jet>& c) -> Jet {
        Jet out(0.0, c[0].dim());
        for (std::size_t j = 1; j < 2 * n + 1; ++j) out += 0.5 * (c[j] * c[j]);
        return out;
    };
    action.J.emplace_back(chart, "J_phase", fn);
    return action;
}

SymmetryAction su2_action() {
    SymmetryAction action;
    action.algebra = LieAlgebraSpec::so3();
    action.algebra.validate();
    action.J.push_back(observable_field(pauli_s(1), "h1"));
    action.J.push_back(observable_field(pauli_s(2), "h2"));
    action.J.push_back(observable_field(pauli_s(3), "h3"));
    return action;
}

ReductionChart hopf_chart(double mu) {
    if (mu <= 0.0)
        throw Error("hopf_chart: mu = 0 is not a weak regular value; need "
                    "mu > 0");
    ReductionChart chart;
    chart.mu = {mu};
    chart.level_dim = 4;   // (t, phi, th1, th2)
    chart.reduced_dim = 3; // (t, phi, theta)
    const double radius = std::sqrt(2.0 * mu);

    chart.sigma = [radius](const std::vector<Jet>& u) {
        const Jet& t = u[0];
        const Jet& phi = u[1];
        const Jet& th1 = u[2];
        const Jet& th2 = u[3];
        // chart order (t, q1, q2, p1, p2)
        std::vector<Jet> x(5, Jet(0.0, t.dim()));
        x[0] = t;
        x[1] = radius * (sin(phi) * cos(th1));
        x[2] = radius * (cos(phi) * cos(th2));
        x[3] = radius * (sin(phi) * sin(th1));
        x[4] = radius * (cos(phi) * sin(th2));
        return x;
    };
    chart.project = [](const std::vector<Jet>& u) {
        return std::vector<Jet>{u[0], u[1], u[2] - u[3]};
    };
    chart.section = [](const std::vector<Jet>& red) {
        // theta_1 = theta, theta_2 = 0
        return std::vector<Jet>{red[0], red[1], red[2], Jet(0.0, red[0].dim())};
    };
    chart.omega_mu = [mu](const Vec& red) {
        Mat w(3, 3);
        const double s = mu * std::sin(2.0 * red[1]);
        w(1, 2) = s;
        w(2, 1) = -s;
        return w;
    };
    chart.eta_mu = [](const Vec&) { return Vec{1.0, 0.0, 0.0}; };
    chart.degenerate = [](const Vec& u) {
        const double phi = u[1];
        const double margin = 1e-6;
        return std::abs(std::sin(2.0 * phi)) < margin;
    };
    chart.fiber_shift = [](const Vec& u, double s) {
        Vec v = u;
        v[2] += s;
        v[3] += s;
        return v;
    };
    return chart;
}

Vec bloch_vector(const Vec& state) {
    static const ScalarField h1 = observable_field(pauli_s(1), "h1");
    static const ScalarField h2 = observable_field(pauli_s(2), "h2");
    static const ScalarField h3 = observable_field(pauli_s(3), "h3");
    return Vec{2.0 * h1.value(state), 2.0 * h2.value(state),
               2.0 * h3.value(state)};
}

double hopf_phi(const Vec& state) {
    const double r1 = std::hypot(state[1], state[3]); // |q1 + i p1|
    const double r2 = std::hypot(state[2], state[4]);
    return std::atan2(r1, r2);
}

double hopf_theta(const Vec& state) {
    return std::atan2(state[3], state[1]) - std::atan2(state[4], state[2]);
}

HermitianEig hermitian_eigensystem(const CMatrix& a) {
    const std::size_t n = a.n;
    // Real embedding [[Re, -Im], [Im, Re]] is symmetric for Hermitian a.
    Mat m(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = a(i, j).real();
            m(i, j + n) = -a(i, j).imag();
            m(i + n, j) = a(i, j).imag();
            m(i + n, j + n) = a(i, j).real();
        }
    const SymEig eig = jacobi_eigensymmetric(m);

    HermitianEig out;
    // Each complex eigenray appears twice (v and iv); keep one per pair.
    for (std::size_t k = 0; k < 2 * n; ++k) {
        std::vector<Complex> psi(n);
        for (std::size_t j = 0; j < n; ++j)
            psi[j] = Complex(eig.vectors(j, k), eig.vectors(j + n, k));
        double nrm = 0.0;
        for (const auto& z : psi) nrm += std::norm(z);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) continue;
        for (auto& z : psi) z /= nrm;
        bool duplicate = false;
        for (std::size_t r = 0; r < out.vectors.size(); ++r) {
            if (std::abs(eig.values[k] - out.values[r]) > 1e-9) continue;
            Complex overlap(0, 0);
            for (std::size_t j = 0; j < n; ++j)
                overlap += std::conj(out.vectors[r][j]) * psi[j];
            if (std::abs(overlap) > 1.0 - 1e-8) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        // Phase fix: first component with |z| > tol made real positive.
        Complex phase(1, 0);
        for (const auto& z : psi)
            if (std::abs(z) > 1e-9) {
                phase = std::conj(z) / std::abs(z);
                break;
            }
        for (auto& z : psi) z *= phase;
        out.values.push_back(eig.values[k]);
        out.vectors.push_back(psi);
    }
    return out;
}

EigenCertifyResult rep_eigenvector_certify(const HermitianPath& path,
                                           const std::vector<double>& times,
                                           double tol) {
    if (times.empty())
        throw Error("rep_eigenvector_certify: empty time grid");
    for (double t : times)
        if (path.matrix_at(t).hermiticity_defect() > 1e-12)
            throw Error("rep_eigenvector_certify: H(t) is not Hermitian at t "
                        "= " + std::to_string(t));
    EigenCertifyResult result;

    // Degenerate spectra make the eigenvector selection ambiguous; flag the
    // times instead of tracking subspaces.
    for (double t : times) {
        const HermitianEig eig = hermitian_eigensystem(path.matrix_at(t));
        for (std::size_t i = 0; i + 1 < eig.values.size(); ++i)
            if (std::abs(eig.values[i + 1] - eig.values[i]) < 1e-10) {
                result.degenerate_spectrum = true;
                result.degenerate_times.push_back(t);
                break;
            }
    }

    const HermitianEig eig0 = hermitian_eigensystem(path.matrix_at(times[0]));
    for (std::size_t r = 0; r < eig0.vectors.size(); ++r) {
        const std::vector<Complex>& v = eig0.vectors[r];
        double worst = 0.0;
        for (double t : times) {
            const CMatrix ht = path.matrix_at(t);
            const std::vector<Complex> hv = ht.apply(v);
            Complex rayleigh(0, 0);
            for (std::size_t j = 0; j < v.size(); ++j)
                rayleigh += std::conj(v[j]) * hv[j];
            double res = 0.0;
            for (std::size_t j = 0; j < v.size(); ++j)
                res += std::norm(hv[j] - rayleigh * v[j]);
            worst = std::max(worst, std::sqrt(res));
        }
        if (worst > tol) continue;

        CertifiedRay ray;
        ray.psi = v;
        ray.eigen_residual = worst;

        if (path.separable) {
            // Cross-check against the Lagrange-multiplier solve.
            const ScalarField h = schrodinger_field(path);
            const SymmetryAction action = u1_action(path.n);
            const Vec x0 = quantum_state(times[0], v);
            const Vec z0(x0.begin() + 1, x0.end());
            const REPCandidate cand =
                find_rep(h, action, z0, times, std::max(tol, 1e-10));
            if (cand.certified) {
                // Compare up to phase: align and take the distance.
                std::vector<Complex> psi_cand(path.n);
                for (std::size_t j = 0; j < path.n; ++j)
                    psi_cand[j] =
                        Complex(cand.z_e[j], cand.z_e[path.n + j]);
                Complex overlap(0, 0);
                double nv = 0.0, nc = 0.0;
                for (std::size_t j = 0; j < path.n; ++j) {
                    overlap += std::conj(psi_cand[j]) * v[j];
                    nv += std::norm(v[j]);
                    nc += std::norm(psi_cand[j]);
                }
                double gap = 0.0;
                if (nc > 1e-20) {
                    const Complex phase = overlap / std::abs(overlap);
                    for (std::size_t j = 0; j < path.n; ++j)
                        gap = std::max(gap,
                                       std::abs(psi_cand[j] * phase /
                                                    std::sqrt(nc) -
                                                v[j] / std::sqrt(nv)));
                }
                ray.rep_agreement = gap;
                ray.rep_checked = true;
            }
        }
        result.rays.push_back(std::move(ray));
    }
    return result;
}

} // namespace cosym
