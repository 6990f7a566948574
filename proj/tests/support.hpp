#ifndef SJQ_TESTS_SUPPORT_HPP
#define SJQ_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "sjq/kahler.hpp"

namespace sjq::testing {

inline MatrixXd rotation_block(double s) {
    MatrixXd r(2, 2);
    r << 0, s, -s, 0;
    return r;
}

inline MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
    }
    Eigen::HouseholderQR<MatrixXd> qr(a);
    MatrixXd q = qr.householderQ();
    // fix reflection signs so Q is well spread
    MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        if (r(i, i) < 0) q.col(i) = -q.col(i);
    }
    return q;
}

// Invertible antisymmetric matrix with known block scales: Q^T blockdiag(s_i R) Q.
// The mode scales of the induced decomposition are 1/s_i.
inline MatrixXd random_antisymmetric(const std::vector<double>& scales, std::mt19937_64& rng) {
    const int n = 2 * static_cast<int>(scales.size());
    MatrixXd blocks = MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        blocks.block<2, 2>(2 * i, 2 * i) = rotation_block(scales[i]);
    }
    MatrixXd q = random_orthogonal(n, rng);
    MatrixXd e = q.transpose() * blocks * q;
    return 0.5 * (e - e.transpose());
}

inline MatrixXd random_antisymmetric(int half_dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> scale(0.3, 3.0);
    std::vector<double> scales(half_dim);
    for (auto& s : scales) s = scale(rng);
    return random_antisymmetric(scales, rng);
}

inline MatrixXd random_spd(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXd b(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) b(i, j) = gauss(rng);
    }
    return b.transpose() * b + 0.5 * MatrixXd::Identity(n, n);
}

// Gram-antisymmetric invertible operator on a space with gram G: built from a
// frame-antisymmetric matrix mapped back through the Cholesky factor.
inline PauliJordanOperator random_pauli_jordan(int half_dim, const MatrixXd& gram,
                                               std::mt19937_64& rng) {
    GramFrame frame(gram);
    MatrixXd e = frame.from_frame(random_antisymmetric(half_dim, rng));
    return PauliJordanOperator::make(InnerProductSpace::with_gram(gram), e);
}

inline VectorXd random_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
}

inline MatrixXcd random_complex_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    }
    return m;
}

}  // namespace sjq::testing

#endif
