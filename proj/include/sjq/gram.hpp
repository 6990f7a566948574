#ifndef SJQ_GRAM_HPP
#define SJQ_GRAM_HPP

#include <Eigen/Dense>

namespace sjq {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Cholesky frame for a symmetric positive-definite gram matrix G = L L^T.
// Maps operators between the ambient coordinates and the orthonormal frame
// in which the inner product is the identity:
//
//   vector:    x_frame = L^T x
//   operator:  M_frame = L^T M L^{-T}
//
// A G-self-adjoint operator becomes symmetric in the frame, a G-skew one
// becomes antisymmetric, so standard symmetric eigensolvers apply.
class GramFrame {
  public:
    explicit GramFrame(const MatrixXd& gram);

    int dim() const { return static_cast<int>(gram_.rows()); }
    const MatrixXd& gram() const { return gram_; }

    MatrixXd to_frame(const MatrixXd& op_ambient) const;
    MatrixXd from_frame(const MatrixXd& op_frame) const;
    MatrixXcd to_frame(const MatrixXcd& op_ambient) const;
    MatrixXcd from_frame(const MatrixXcd& op_frame) const;

    VectorXd vec_to_frame(const VectorXd& x) const;
    VectorXd vec_from_frame(const VectorXd& x) const;

    // Adjoint with respect to G: M* = G^{-1} M^T G (real) or G^{-1} M^H G.
    MatrixXd adjoint(const MatrixXd& op) const;
    MatrixXcd adjoint(const MatrixXcd& op) const;

    double inner(const VectorXd& a, const VectorXd& b) const { return a.dot(gram_ * b); }

    MatrixXd solve_gram(const MatrixXd& rhs) const;  // G^{-1} rhs

  private:
    MatrixXd gram_;
    MatrixXd l_;       // lower Cholesky factor
    MatrixXd l_t_;     // L^T
    MatrixXd l_inv_t_; // L^{-T}
    MatrixXd l_inv_;   // L^{-1}
};

// Validates symmetry (relative 1e-12) and positive definiteness.
void check_gram(const MatrixXd& gram);

// Eigendecomposition of a G-self-adjoint operator M (ambient coordinates).
// Returns ascending eigenvalues and G-orthonormal eigenvectors as columns.
struct WeightedEigen {
    VectorXd values;
    MatrixXd vectors;
};
WeightedEigen weighted_self_adjoint_eigen(const MatrixXd& op, const GramFrame& frame);

// Spectral norm weighted by an SPD bilinear form: ||M||_W = ||W^{1/2-frame} M||_2.
double weighted_operator_norm(const MatrixXd& op, const MatrixXd& weight);

}  // namespace sjq

#endif
