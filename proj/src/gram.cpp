#include "sjq/gram.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sjq/errors.hpp"

namespace sjq {

void check_gram(const MatrixXd& gram) {
    if (gram.rows() != gram.cols() || gram.rows() == 0) {
        throw InvalidInput("gram matrix must be square and nonempty");
    }
    const double scale = gram.norm();
    if ((gram - gram.transpose()).norm() > 1e-12 * (scale > 0 ? scale : 1.0)) {
        throw InvalidInput("gram matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw InvalidInput("gram matrix is not positive definite");
    }
}

GramFrame::GramFrame(const MatrixXd& gram) : gram_(gram) {
    check_gram(gram);
    Eigen::LLT<MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw InvalidInput("gram matrix Cholesky factorization failed");
    }
    l_ = llt.matrixL();
    l_t_ = l_.transpose();
    l_inv_ = l_.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(dim(), dim()));
    l_inv_t_ = l_inv_.transpose();
}

MatrixXd GramFrame::to_frame(const MatrixXd& op) const { return l_t_ * op * l_inv_t_; }
MatrixXd GramFrame::from_frame(const MatrixXd& op) const { return l_inv_t_ * op * l_t_; }
MatrixXcd GramFrame::to_frame(const MatrixXcd& op) const { return l_t_ * op * l_inv_t_; }
MatrixXcd GramFrame::from_frame(const MatrixXcd& op) const { return l_inv_t_ * op * l_t_; }

VectorXd GramFrame::vec_to_frame(const VectorXd& x) const { return l_t_ * x; }
VectorXd GramFrame::vec_from_frame(const VectorXd& x) const { return l_inv_t_ * x; }

MatrixXd GramFrame::adjoint(const MatrixXd& op) const {
    return solve_gram(op.transpose() * gram_);
}

MatrixXcd GramFrame::adjoint(const MatrixXcd& op) const {
    MatrixXcd rhs = op.adjoint() * gram_;
    return gram_.ldlt().solve(rhs.real()) +
           std::complex<double>(0, 1) * gram_.ldlt().solve(rhs.imag());
}

MatrixXd GramFrame::solve_gram(const MatrixXd& rhs) const {
    return l_inv_t_ * (l_inv_ * rhs);
}

WeightedEigen weighted_self_adjoint_eigen(const MatrixXd& op, const GramFrame& frame) {
    MatrixXd sym = frame.to_frame(op);
    sym = 0.5 * (sym + sym.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
    WeightedEigen out;
    out.values = es.eigenvalues();
    // frame eigenvector q maps back to a G-orthonormal ambient vector L^{-T} q
    out.vectors = frame.gram().llt().matrixL().transpose().solve(es.eigenvectors());
    return out;
}

double weighted_operator_norm(const MatrixXd& op, const MatrixXd& weight) {
    GramFrame frame(weight);
    MatrixXd m = frame.to_frame(op);
    Eigen::JacobiSVD<MatrixXd> svd(m);
    return svd.singularValues().maxCoeff();
}

}  // namespace sjq
