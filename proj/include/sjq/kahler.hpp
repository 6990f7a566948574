#ifndef SJQ_KAHLER_HPP
#define SJQ_KAHLER_HPP

#include <vector>

#include "sjq/gram.hpp"

namespace sjq {

// Real vector space with an explicit SPD gram matrix. gram defaults to the
// identity; causal-set inputs with nonstandard measures pass their own.
struct InnerProductSpace {
    int dim = 0;
    MatrixXd gram;

    static InnerProductSpace standard(int dim);
    static InnerProductSpace with_gram(MatrixXd gram);
};

// Invertible operator E with E* = -E in the G-inner product (equivalently
// G E + E^T G = 0). The symplectic form it induces is w(a,b) = <a, E^{-1} b>.
struct PauliJordanOperator {
    InnerProductSpace space;
    MatrixXd matrix;

    // Throws InvalidInput if E is not gram-antisymmetric within tol * |E|.
    static PauliJordanOperator make(InnerProductSpace space, MatrixXd e,
                                    double antisym_tol = 1e-8);

    MatrixXd omega_matrix() const;  // bilinear-form matrix of w: G E^{-1}
};

// Output of the polar decomposition E = |E| U*, U = -J. Conventions:
//   J = E |E|^{-1} = -E^{-1} |E|,  J^2 = -1
//   eta(a,b) = <a, |E|^{-1} b>   (matrix G |E|^{-1})
//   thetas   = eigenvalues of |E|^{-1}, one per two-dimensional mode,
//              sorted descending
//   mode_basis columns are [u_1 v_1 u_2 v_2 ...] with v_i = J u_i, all
//   G-orthonormal; in these coordinates |E|^{-1} = diag(t_1,t_1,t_2,t_2,...).
// Degenerate thetas admit any G-orthonormal J-compatible basis choice, so
// everything downstream is tested only through basis-independent quantities.
struct KahlerDecomposition {
    InnerProductSpace space;
    MatrixXd abs_e;       // |E|
    MatrixXd u;           // gram-orthogonal, E = |E| U*
    MatrixXd j;           // complex structure
    MatrixXd eta;         // bilinear-form matrix of eta
    VectorXd thetas;      // N values, descending
    MatrixXd mode_basis;  // 2N x 2N
    double trace_abs_e_inv = 0.0;  // accumulated from the eigenvalues, not the matrix

    int modes() const { return static_cast<int>(thetas.size()); }

    // Ground eigenvalue of the mode Laplacian: tr|E|^{-1} / (2 hbar).
    double lambda(double hbar) const;

    VectorXd mode_u(int i) const { return mode_basis.col(2 * i); }
    VectorXd mode_v(int i) const { return mode_basis.col(2 * i + 1); }
};

struct RestrictionResult {
    MatrixXd basis;  // dim x 2N, columns G-orthonormal, span the image of E_off
    PauliJordanOperator restricted;
};

// Projects a possibly degenerate gram-antisymmetric operator onto its image.
// Retains singular directions with sigma > rank_tol * sigma_max. Throws
// DegenerateInput when everything is below tolerance and OddRank when the
// retained count cannot be paired.
RestrictionResult restrict_to_image(const MatrixXd& e_off, const MatrixXd& gram_off,
                                    double rank_tol = 1e-10);

// Throws SingularE if the smallest singular value of E is below
// singular_tol * sigma_max.
KahlerDecomposition polar_decompose(const PauliJordanOperator& e,
                                    double singular_tol = 1e-12);

struct SpectrumLine {
    double value;
    long multiplicity;
};

// Lowest `count` distinct values of { sum_i (2 n_i + 1) t_i / hbar } with
// multiplicities, ascending. Exact for dyadic-rational inputs.
std::vector<SpectrumLine> laplacian_spectrum(const std::vector<double>& thetas,
                                             double hbar, int count);

// True iff the nonzero eigenvalues of AB and BA agree as multisets within tol.
bool spectra_ab_ba_check(const MatrixXcd& a, const MatrixXcd& b, double tol);

}  // namespace sjq

#endif
