#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "cosym/equilibria.hpp"
#include "cosym/symmetry.hpp"

namespace cosym {

using Complex = std::complex<double>;

/// Small dense complex matrix (row-major).
struct CMatrix {
    std::size_t n = 0;
    std::vector<Complex> a;

    CMatrix() = default;
    explicit CMatrix(std::size_t size) : n(size), a(size * size, Complex(0, 0)) {}

    Complex& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    Complex operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    std::vector<Complex> apply(const std::vector<Complex>& psi) const;
    double hermiticity_defect() const; // max |A - A^dagger|
    static CMatrix identity(std::size_t n);
};

/// Pauli basis operators S_j = sigma_j / 2 and the 2x2 identity.
CMatrix pauli_s(std::size_t j); // j = 1, 2, 3
CMatrix identity2();

/// Scalar envelope B(t) with exact jets; the named shapes used by the
/// two-level benchmarks.
struct Envelope {
    enum class Kind { constant, one_plus_sin, exp_decay };
    Kind kind = Kind::constant;
    double a = 0.0; // one_plus_sin: 1 + a sin(b t); exp_decay: exp(-a t)
    double b = 1.0;

    static Envelope constant() { return {Kind::constant, 0.0, 0.0}; }
    static Envelope one_plus_sin(double a, double b = 1.0) {
        return {Kind::one_plus_sin, a, b};
    }
    static Envelope exp_decay(double a) { return {Kind::exp_decay, a, 0.0}; }

    double operator()(double t) const;
    Jet eval(const Jet& t) const;
    std::string describe() const;
};

/// t -> Hermitian H(t). The separable form envelope(t) * base covers the
/// benchmark systems and is the one that admits an exact-jet Hamiltonian
/// function; a free-form matrix_at supports eigenvector certification of
/// arbitrary paths.
struct HermitianPath {
    std::size_t n = 0;
    CMatrix base;              // separable part (empty if free-form only)
    Envelope envelope;
    bool separable = true;
    std::function<CMatrix(double)> matrix_at;

    static HermitianPath from_base(CMatrix base, Envelope env);
    static HermitianPath free_form(std::size_t n,
                                   std::function<CMatrix(double)> fn);
};

/// Two-level path B(t)(B0 I + B1 S1 + B2 S2 + B3 S3).
HermitianPath two_level_path(double b0, double b1, double b2, double b3,
                             Envelope env = Envelope::constant());

/// Real chart of C^n: (t, q_1..q_n, p_1..p_n) with <e_j, psi> = q_j + i p_j.
DarbouxChart quantum_chart(std::size_t n);

/// Chart state from a complex state vector at time t.
Vec quantum_state(double t, const std::vector<Complex>& psi);
std::vector<Complex> psi_from_state(const Vec& state);

/// f_A(psi) = (1/2) <psi, A psi> as a ScalarField with exact jets.
/// Throws on non-Hermitian input.
ScalarField observable_field(const CMatrix& a, const std::string& name = "f_A");

/// Hamiltonian function h(t, psi) = envelope(t) * f_base(psi) of a separable
/// path; its evolution field reproduces the real-linear Schrodinger system.
ScalarField schrodinger_field(const HermitianPath& path);

/// Phase action of the unit complex numbers: one-dimensional abelian algebra
/// with J = (1/2) sum (q_j^2 + p_j^2).
SymmetryAction u1_action(std::size_t n);

/// The (h_1, h_2, h_3) triple on the two-level chart with so(3) structure
/// constants; its cocycle form vanishes.
SymmetryAction su2_action();

/// Hopf-coordinate reduction chart of the two-level system at momentum
/// mu > 0: sigma(t, phi, th1, th2) = sqrt(2 mu) (sin phi cos th1, ...),
/// reduced forms eta = dt, omega = mu sin(2 phi) dphi ^ d(th1 - th2),
/// degenerate at phi in {0, pi/2}.
ReductionChart hopf_chart(double mu);

/// Bloch-type embedding of the reduced point: 2 (h_1, h_2, h_3)(state),
/// well defined at the chart's degeneracy loci.
Vec bloch_vector(const Vec& state);
/// Hopf angle phi recovered from the ambient state.
double hopf_phi(const Vec& state);
/// Hopf angle theta = theta_1 - theta_2 (meaningless at the poles).
double hopf_theta(const Vec& state);

struct CertifiedRay {
    std::vector<Complex> psi;  // phase-fixed: first nonzero entry real > 0
    double eigen_residual = 0.0;   // max over grid of ||H v - <v,Hv> v||
    double rep_agreement = 0.0;    // distance to the find_rep point, up to phase
    bool rep_checked = false;
};

struct EigenCertifyResult {
    std::vector<CertifiedRay> rays;
    bool degenerate_spectrum = false; // flagged per grid time; ambiguous rays
    std::vector<double> degenerate_times;
};

/// Retains the eigenvectors of H(times[0]) that stay eigenvectors on the
/// whole grid, then cross-checks each ray against find_rep with u1_action.
EigenCertifyResult rep_eigenvector_certify(const HermitianPath& path,
                                           const std::vector<double>& times,
                                           double tol);

/// Hermitian eigendecomposition via Jacobi on the 2n x 2n real embedding.
struct HermitianEig {
    std::vector<double> values; // ascending, one per complex ray
    std::vector<std::vector<Complex>> vectors;
};
HermitianEig hermitian_eigensystem(const CMatrix& a);

} // namespace cosym
