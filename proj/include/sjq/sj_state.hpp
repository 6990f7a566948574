#ifndef SJQ_SJ_STATE_HPP
#define SJQ_SJ_STATE_HPP

#include <complex>
#include <vector>

#include "sjq/kahler.hpp"

namespace sjq {

// A = (|E| + iE)/2 on the complexified space. Hermitian in the G-inner
// product; its conjugate is (|E| - iE)/2, so A - conj(A) = iE holds exactly
// and A conj(A) = (|E|^2 + E^2)/4 vanishes.
struct SJOperator {
    InnerProductSpace space;
    MatrixXcd matrix;

    double min_eigenvalue() const;
    double hermiticity_residual() const;    // |A - A*| / |A|
    double commutator_residual(const MatrixXd& e) const;  // |(A - conj A) - iE|
    double purity_residual() const;         // |A conj(A)|
};

SJOperator sj_operator(const KahlerDecomposition& k, const PauliJordanOperator& e);

// Independent route: solves H^2 = -E^2 with H real positive commuting with E
// through a Schur-based matrix square root, then A = (H + iE)/2. Exists so the
// closed form above has a cross-check that shares no code path.
SJOperator solve_sj_axioms(const PauliJordanOperator& e, double singular_tol = 1e-12);

// Real linear functional on the on-shell space together with its canonical
// complex components. With the gram-orthonormal mode pairs (u_i, v_i = J u_i)
// and mode scales t_i, the components are
//
//   phi_i = (phi(u_i) - i phi(v_i)) / sqrt(2 t_i),
//
// the normalization in which eta^{-1}(phi, phi) = 2 sum |phi_i|^2 and the
// bracket {phi, phi'} = -2 Im sum phi_i conj(phi'_i).
struct Covector {
    VectorXd real;                 // ambient dual components, phi(w) = real . w
    VectorXcd complex_components;  // one per mode
};

Covector covector_from_real(const KahlerDecomposition& k, const VectorXd& real);
Covector covector_from_modes(const KahlerDecomposition& k, const VectorXcd& components);

// Quasi-free state data: sigma(W(phi)) = exp(-(hbar/4) eta_inv(phi, phi)).
// theta_op is the operator with eta_G(v2, Theta v1) = omega(v1, v2); for the
// state built from a decomposition it equals J, and the domination condition
// for a valid state reads |Theta|_{eta_G} <= 1 with purity at equality plus
// Theta^2 = -1.
struct QuasiFreeState {
    double hbar = 1.0;
    MatrixXd eta_inverse;  // covariance bilinear form on covectors
    MatrixXd theta_op;
    MatrixXd vpi;          // Poisson bivector on covectors: E G^{-1}

    QuasiFreeState with_eta_scaled(double factor) const;  // eta_G -> factor * eta_G
};

QuasiFreeState make_sj_state(const KahlerDecomposition& k, const PauliJordanOperator& e,
                             double hbar);

std::complex<double> state_on_weyl(const Covector& phi, const QuasiFreeState& s);

double poisson_bracket_covectors(const QuasiFreeState& s, const VectorXd& phi_a,
                                 const VectorXd& phi_b);

struct PurityReport {
    double norm_theta = 0.0;
    bool is_pure = false;
    bool dominated = false;
};

// Recomputes Theta from the state's covariance and the supplied symplectic
// form matrix (bilinear form, G E^{-1}).
PurityReport purity_check(const QuasiFreeState& s, const MatrixXd& omega, double tol = 1e-10);

// Minimum eigenvalue of M[a][b] = sigma(W(phi_a)* W(phi_b)); >= -tol for a
// positive state.
double state_positivity_gram(const std::vector<Covector>& phis, const QuasiFreeState& s);

}  // namespace sjq

#endif
