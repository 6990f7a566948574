#include "sjq/sj_state.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "sjq/errors.hpp"

namespace sjq {

namespace {
const std::complex<double> kI{0.0, 1.0};
}

double SJOperator::min_eigenvalue() const {
    GramFrame frame(space.gram);
    MatrixXcd m = frame.to_frame(matrix);
    m = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double SJOperator::hermiticity_residual() const {
    GramFrame frame(space.gram);
    MatrixXcd adj = frame.adjoint(matrix);
    return (matrix - adj).norm() / std::max(matrix.norm(), 1e-300);
}

double SJOperator::commutator_residual(const MatrixXd& e) const {
    return ((matrix - matrix.conjugate()) - kI * e).norm();
}

double SJOperator::purity_residual() const {
    return (matrix * matrix.conjugate()).norm();
}

SJOperator sj_operator(const KahlerDecomposition& k, const PauliJordanOperator& e) {
    SJOperator a;
    a.space = e.space;
    a.matrix = 0.5 * (k.abs_e.cast<std::complex<double>>() + kI * e.matrix);
    return a;
}

SJOperator solve_sj_axioms(const PauliJordanOperator& e, double singular_tol) {
    GramFrame frame(e.space.gram);
    MatrixXd e_frame = frame.to_frame(e.matrix);
    e_frame = 0.5 * (e_frame - e_frame.transpose());

    Eigen::JacobiSVD<MatrixXd> svd(e_frame);
    const double sigma_max = svd.singularValues().maxCoeff();
    if (sigma_max <= 0.0 ||
        svd.singularValues().minCoeff() <= singular_tol * sigma_max) {
        throw SingularE("Pauli-Jordan operator is singular");
    }

    // positive commuting square root of -E^2 through the Schur form; shares
    // no code with the eigendecomposition route used by polar_decompose
    MatrixXd minus_sq = -e_frame * e_frame;
    minus_sq = 0.5 * (minus_sq + minus_sq.transpose());
    MatrixXd h_frame = minus_sq.sqrt();
    h_frame = 0.5 * (h_frame + h_frame.transpose());

    SJOperator a;
    a.space = e.space;
    a.matrix = 0.5 * (frame.from_frame(h_frame).cast<std::complex<double>>() + kI * e.matrix);
    return a;
}

Covector covector_from_real(const KahlerDecomposition& k, const VectorXd& real) {
    if (real.size() != k.space.dim) {
        throw DimensionMismatch("covector length does not match the space dimension");
    }
    Covector c;
    c.real = real;
    c.complex_components.resize(k.modes());
    for (int i = 0; i < k.modes(); ++i) {
        const double p = real.dot(k.mode_u(i));
        const double q = real.dot(k.mode_v(i));
        c.complex_components[i] = std::complex<double>(p, -q) / std::sqrt(2.0 * k.thetas[i]);
    }
    return c;
}

Covector covector_from_modes(const KahlerDecomposition& k, const VectorXcd& components) {
    if (components.size() != k.modes()) {
        throw DimensionMismatch("component count does not match the mode count");
    }
    Covector c;
    c.complex_components = components;
    c.real = VectorXd::Zero(k.space.dim);
    for (int i = 0; i < k.modes(); ++i) {
        const double scale = std::sqrt(2.0 * k.thetas[i]);
        c.real += scale * components[i].real() * (k.space.gram * k.mode_u(i));
        c.real -= scale * components[i].imag() * (k.space.gram * k.mode_v(i));
    }
    return c;
}

QuasiFreeState QuasiFreeState::with_eta_scaled(double factor) const {
    if (!(factor > 0)) throw InvalidInput("eta scale factor must be positive");
    QuasiFreeState s = *this;
    s.eta_inverse /= factor;
    s.theta_op /= factor;
    return s;
}

QuasiFreeState make_sj_state(const KahlerDecomposition& k, const PauliJordanOperator& e,
                             double hbar) {
    if (!(hbar > 0)) throw InvalidInput("hbar must be positive");
    QuasiFreeState s;
    s.hbar = hbar;
    MatrixXd gram_inv = e.space.gram.ldlt().solve(MatrixXd::Identity(e.space.dim, e.space.dim));
    s.eta_inverse = k.abs_e * gram_inv;
    s.eta_inverse = 0.5 * (s.eta_inverse + s.eta_inverse.transpose());
    s.theta_op = k.j;
    s.vpi = e.matrix * gram_inv;
    s.vpi = 0.5 * (s.vpi - s.vpi.transpose());
    return s;
}

std::complex<double> state_on_weyl(const Covector& phi, const QuasiFreeState& s) {
    if (phi.real.size() != s.eta_inverse.rows()) {
        throw DimensionMismatch("covector length does not match the state");
    }
    const double quad = phi.real.dot(s.eta_inverse * phi.real);
    return std::exp(-0.25 * s.hbar * quad);
}

double poisson_bracket_covectors(const QuasiFreeState& s, const VectorXd& phi_a,
                                 const VectorXd& phi_b) {
    if (phi_a.size() != s.vpi.rows() || phi_b.size() != s.vpi.rows()) {
        throw DimensionMismatch("covector length does not match the state");
    }
    return phi_a.dot(s.vpi * phi_b);
}

PurityReport purity_check(const QuasiFreeState& s, const MatrixXd& omega, double tol) {
    const Eigen::Index n = omega.rows();
    if (omega.cols() != n || s.eta_inverse.rows() != n) {
        throw DimensionMismatch("omega shape does not match the state");
    }
    Eigen::FullPivLU<MatrixXd> lu(omega);
    if (!lu.isInvertible()) {
        throw SingularOmega("symplectic form matrix is singular");
    }
    // eta_G(v2, Theta v1) = omega(v1, v2)  =>  Theta = -eta_G^{-1} omega
    MatrixXd theta = -s.eta_inverse * omega;
    MatrixXd eta_g = s.eta_inverse.ldlt().solve(MatrixXd::Identity(n, n));
    eta_g = 0.5 * (eta_g + eta_g.transpose());

    PurityReport r;
    r.norm_theta = weighted_operator_norm(theta, eta_g);
    const double sq_residual =
        (theta * theta + MatrixXd::Identity(n, n)).norm() / std::sqrt(static_cast<double>(n));
    r.dominated = r.norm_theta <= 1.0 + tol;
    r.is_pure = std::abs(r.norm_theta - 1.0) <= tol && sq_residual <= tol;
    return r;
}

double state_positivity_gram(const std::vector<Covector>& phis, const QuasiFreeState& s) {
    if (phis.empty()) throw InvalidInput("covector list must be nonempty");
    const int m = static_cast<int>(phis.size());
    MatrixXcd gram(m, m);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            // W(phi_a)* W(phi_b) = exp(+(i hbar/2) {phi_a, phi_b}) W(phi_b - phi_a)
            const double bracket = poisson_bracket_covectors(s, phis[a].real, phis[b].real);
            const VectorXd diff = phis[b].real - phis[a].real;
            const double quad = diff.dot(s.eta_inverse * diff);
            gram(a, b) = std::exp(kI * (0.5 * s.hbar * bracket)) *
                         std::exp(-0.25 * s.hbar * quad);
        }
    }
    gram = 0.5 * (gram + gram.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace sjq
