#include "sjq/kahler.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <queue>

#include "sjq/errors.hpp"

namespace sjq {

namespace {

// Deterministic eigenvector orientation: first significant component positive.
void fix_sign(Eigen::Ref<VectorXd> v) {
    const double cut = 1e-8 * v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > cut) {
            if (v[i] < 0) v = -v;
            return;
        }
    }
}

struct FramePairs {
    std::vector<double> sigmas;  // one per pair, in the order given
    MatrixXd columns;            // frame coordinates, [q_1 p_1 q_2 p_2 ...]
};

// Pairs orthonormal singular directions of an antisymmetric frame operator
// into invariant planes (q, p = orientation * E q / sigma). `orientation` is
// +1 for p = J q (mode bases) and -1 for p = -J q (image restriction, which
// reproduces a rotation block in its original layout). Directions are
// grouped by chained closeness of sigma so the pairing never mixes distinct
// invariant subspaces; inside a group the construction is a symplectic
// Gram-Schmidt and stays orthonormal automatically.
FramePairs pair_directions(const MatrixXd& e_frame, const std::vector<double>& sigmas,
                           const MatrixXd& directions, int orientation) {
    FramePairs out;
    const int n = static_cast<int>(e_frame.rows());
    out.columns.resize(n, static_cast<Eigen::Index>(sigmas.size()));

    std::size_t i = 0;
    Eigen::Index col = 0;
    while (i < sigmas.size()) {
        std::size_t j = i + 1;
        while (j < sigmas.size() &&
               std::abs(sigmas[j] - sigmas[j - 1]) <= 1e-6 * std::max(sigmas[j], sigmas[j - 1])) {
            ++j;
        }
        MatrixXd w = directions.middleCols(static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(j - i));
        while (w.cols() > 0) {
            if (w.cols() == 1) {
                throw OddRank("singular directions left an unpaired plane");
            }
            VectorXd q = w.col(0).normalized();
            fix_sign(q);
            VectorXd p = orientation * (e_frame * q);
            p -= q * q.dot(p);
            const double scale = p.norm();
            if (scale <= 0) throw OddRank("degenerate plane in singular pairing");
            p /= scale;
            // per-pair Rayleigh value |E q|; sharper than the group label when
            // a chained group spans close but distinct planes
            out.sigmas.push_back(scale);
            out.columns.col(col++) = q;
            out.columns.col(col++) = p;
            // deflate the group by the extracted plane
            MatrixXd rest = w.rightCols(w.cols() - 1);
            rest -= q * (q.transpose() * rest);
            rest -= p * (p.transpose() * rest);
            Eigen::ColPivHouseholderQR<MatrixXd> qr(rest);
            const Eigen::Index keep = std::max<Eigen::Index>(w.cols() - 2, 0);
            w = qr.householderQ() * MatrixXd::Identity(n, keep);
        }
        i = j;
    }
    return out;
}

}  // namespace

InnerProductSpace InnerProductSpace::standard(int dim) {
    InnerProductSpace s;
    s.dim = dim;
    s.gram = MatrixXd::Identity(dim, dim);
    return s;
}

InnerProductSpace InnerProductSpace::with_gram(MatrixXd gram) {
    check_gram(gram);
    InnerProductSpace s;
    s.dim = static_cast<int>(gram.rows());
    s.gram = std::move(gram);
    return s;
}

PauliJordanOperator PauliJordanOperator::make(InnerProductSpace space, MatrixXd e,
                                              double antisym_tol) {
    if (e.rows() != e.cols() || e.rows() != space.dim) {
        throw ShapeMismatch("operator shape does not match its space");
    }
    check_gram(space.gram);
    const MatrixXd ge = space.gram * e;
    const double scale = std::max(ge.norm(), 1e-300);
    if ((ge + e.transpose() * space.gram).norm() > antisym_tol * scale) {
        throw InvalidInput("operator is not gram-antisymmetric within tolerance");
    }
    return PauliJordanOperator{std::move(space), std::move(e)};
}

MatrixXd PauliJordanOperator::omega_matrix() const {
    Eigen::FullPivLU<MatrixXd> lu(matrix);
    if (!lu.isInvertible()) {
        throw SingularE("Pauli-Jordan operator is singular");
    }
    return space.gram * lu.inverse();
}

RestrictionResult restrict_to_image(const MatrixXd& e_off, const MatrixXd& gram_off,
                                    double rank_tol) {
    GramFrame frame(gram_off);
    if (e_off.rows() != e_off.cols() || e_off.rows() != frame.dim()) {
        throw ShapeMismatch("off-shell operator and gram have mismatched shapes");
    }
    MatrixXd e_frame = frame.to_frame(e_off);
    {
        const double scale = std::max(e_frame.norm(), 1e-300);
        if ((e_frame + e_frame.transpose()).norm() > 1e-6 * scale) {
            throw InvalidInput("off-shell operator is not gram-antisymmetric within tolerance");
        }
    }

    // direct SVD resolves the kernel at machine precision; squaring would not
    Eigen::BDCSVD<MatrixXd> svd(e_frame, Eigen::ComputeFullV);
    const VectorXd sig = svd.singularValues();  // descending
    const double sigma_max = sig.size() > 0 ? sig[0] : 0.0;
    if (sigma_max <= 0.0) {
        throw DegenerateInput("off-shell operator vanishes; no symplectic image");
    }
    const double cut = rank_tol * sigma_max;
    int retained = 0;
    while (retained < sig.size() && sig[retained] > cut) ++retained;
    if (retained == 0) {
        throw DegenerateInput("all singular values below rank tolerance");
    }
    if (retained % 2 != 0) {
        // an antisymmetric operator has paired singular values; an odd count
        // means a pair straddles the cut or the input is not antisymmetric
        const bool straddle = retained < sig.size() &&
                              sig[retained - 1] - sig[retained] <= 1e-8 * sig[retained - 1];
        if (straddle) {
            --retained;  // drop the half-cut plane entirely
            if (retained == 0) throw DegenerateInput("all singular pairs below rank tolerance");
        } else {
            throw OddRank("retained singular directions form an odd-dimensional space");
        }
    }
    if (retained == frame.dim()) {
        RestrictionResult out;
        out.basis = MatrixXd::Identity(frame.dim(), frame.dim());
        out.restricted = PauliJordanOperator::make(InnerProductSpace::with_gram(gram_off), e_off);
        return out;
    }

    std::vector<double> sigmas(sig.data(), sig.data() + retained);
    FramePairs pairs = pair_directions(e_frame, sigmas, svd.matrixV().leftCols(retained),
                                       /*orientation=*/-1);

    MatrixXd e_sub = pairs.columns.transpose() * e_frame * pairs.columns;
    e_sub = 0.5 * (e_sub - e_sub.transpose());

    RestrictionResult out;
    // ambient basis: columns L^{-T} q are G-orthonormal
    Eigen::LLT<MatrixXd> llt(gram_off);
    out.basis = MatrixXd(llt.matrixL()).transpose().template triangularView<Eigen::Upper>().solve(
        pairs.columns);
    out.restricted = PauliJordanOperator::make(
        InnerProductSpace::standard(static_cast<int>(e_sub.rows())), e_sub);
    return out;
}

KahlerDecomposition polar_decompose(const PauliJordanOperator& e, double singular_tol) {
    GramFrame frame(e.space.gram);
    MatrixXd e_frame = frame.to_frame(e.matrix);
    e_frame = 0.5 * (e_frame - e_frame.transpose());

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(MatrixXd(-e_frame * e_frame));
    const VectorXd vals = es.eigenvalues();
    const double sigma_max = std::sqrt(std::max(0.0, vals.maxCoeff()));
    const double sigma_min = std::sqrt(std::max(0.0, vals.minCoeff()));
    if (sigma_max <= 0.0 || sigma_min <= singular_tol * sigma_max) {
        throw SingularE("Pauli-Jordan operator is singular; restrict to its image first");
    }
    if (vals.size() % 2 != 0) {
        throw OddRank("odd-dimensional space cannot carry a symplectic form");
    }

    // |E| and J in the frame
    MatrixXd q = es.eigenvectors();
    VectorXd sig = vals.cwiseMax(0.0).cwiseSqrt();
    MatrixXd abs_frame = q * sig.asDiagonal() * q.transpose();
    MatrixXd abs_inv_frame = q * sig.cwiseInverse().asDiagonal() * q.transpose();
    MatrixXd j_frame = e_frame * abs_inv_frame;

    KahlerDecomposition k;
    k.space = e.space;
    k.abs_e = frame.from_frame(abs_frame);
    k.j = frame.from_frame(j_frame);
    k.u = -k.j;
    k.eta = e.space.gram * frame.from_frame(abs_inv_frame);

    // mode pairing: process eigenvalues of -E^2 ascending so thetas descend
    std::vector<double> sigmas(vals.size());
    for (int i = 0; i < vals.size(); ++i) sigmas[i] = std::sqrt(std::max(0.0, vals[i]));
    FramePairs pairs = pair_directions(e_frame, sigmas, q, /*orientation=*/+1);

    // stable re-sort on the per-pair values; inside a chained group the
    // Rayleigh estimates may micro-violate the eigenvalue order
    const int n_modes = static_cast<int>(pairs.sigmas.size());
    std::vector<int> order(n_modes);
    for (int i = 0; i < n_modes; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return pairs.sigmas[a] < pairs.sigmas[b]; });

    k.thetas.resize(n_modes);
    MatrixXd sorted_columns(pairs.columns.rows(), pairs.columns.cols());
    for (int i = 0; i < n_modes; ++i) {
        k.thetas[i] = 1.0 / pairs.sigmas[order[i]];
        sorted_columns.col(2 * i) = pairs.columns.col(2 * order[i]);
        sorted_columns.col(2 * i + 1) = pairs.columns.col(2 * order[i] + 1);
    }
    // pair-consistent trace: each mode plane contributes 2/sigma, so the
    // ground eigenvalue agrees with the enumerated spectrum at any conditioning
    k.trace_abs_e_inv = 2.0 * k.thetas.sum();
    Eigen::LLT<MatrixXd> llt(e.space.gram);
    k.mode_basis = MatrixXd(llt.matrixL())
                       .transpose()
                       .template triangularView<Eigen::Upper>()
                       .solve(sorted_columns);
    return k;
}

double KahlerDecomposition::lambda(double hbar) const {
    if (hbar <= 0) throw InvalidInput("hbar must be positive");
    return trace_abs_e_inv / (2.0 * hbar);
}

std::vector<SpectrumLine> laplacian_spectrum(const std::vector<double>& thetas, double hbar,
                                             int count) {
    if (count < 1) throw InvalidInput("count must be at least 1");
    if (hbar <= 0) throw InvalidInput("hbar must be positive");
    for (double t : thetas) {
        if (!(t > 0)) throw InvalidTheta("all mode scales must be strictly positive");
    }
    const int n = static_cast<int>(thetas.size());
    if (n == 0) return {};

    using Node = std::pair<double, std::vector<int>>;
    auto cmp = [](const Node& a, const Node& b) { return a.first > b.first; };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);

    double ground = 0.0;
    for (double t : thetas) ground += t;
    heap.push({ground / hbar, std::vector<int>(n, 0)});

    // each multi-index is pushed once: from n, increment coordinates up to the
    // first nonzero one, so every lattice point has a unique predecessor
    auto first_nonzero = [](const std::vector<int>& idx) {
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] != 0) return static_cast<int>(i);
        }
        return static_cast<int>(idx.size()) - 1;
    };

    std::vector<SpectrumLine> out;
    while (!heap.empty() && static_cast<int>(out.size()) < count) {
        auto [value, idx] = heap.top();
        heap.pop();
        const int limit = first_nonzero(idx);
        for (int i = 0; i <= limit; ++i) {
            auto next = idx;
            next[i] += 1;
            heap.push({value + 2.0 * thetas[i] / hbar, std::move(next)});
        }
        const double tie = 1e-12 * std::max(1.0, std::abs(value));
        if (!out.empty() && std::abs(out.back().value - value) <= tie) {
            out.back().multiplicity += 1;
        } else {
            out.push_back({value, 1});
        }
        // flush remaining members of the current tie group even at the cut
        while (static_cast<int>(out.size()) == count && !heap.empty() &&
               std::abs(heap.top().first - out.back().value) <= tie) {
            auto [v2, idx2] = heap.top();
            heap.pop();
            const int lim2 = first_nonzero(idx2);
            for (int i = 0; i <= lim2; ++i) {
                auto next = idx2;
                next[i] += 1;
                heap.push({v2 + 2.0 * thetas[i] / hbar, std::move(next)});
            }
            out.back().multiplicity += 1;
        }
    }
    return out;
}

bool spectra_ab_ba_check(const MatrixXcd& a, const MatrixXcd& b, double tol) {
    if (a.cols() != b.rows() || b.cols() != a.rows()) {
        throw ShapeMismatch("inner dimensions of the operator pair do not match");
    }
    Eigen::ComplexEigenSolver<MatrixXcd> es_ab(a * b, /*computeEigenvectors=*/false);
    Eigen::ComplexEigenSolver<MatrixXcd> es_ba(b * a, /*computeEigenvectors=*/false);

    double scale = 1.0;
    for (auto v : es_ab.eigenvalues()) scale = std::max(scale, std::abs(v));
    for (auto v : es_ba.eigenvalues()) scale = std::max(scale, std::abs(v));
    const double cut = tol * scale;

    std::vector<std::complex<double>> ab, ba;
    for (auto v : es_ab.eigenvalues()) {
        if (std::abs(v) > cut) ab.push_back(v);
    }
    for (auto v : es_ba.eigenvalues()) {
        if (std::abs(v) > cut) ba.push_back(v);
    }
    if (ab.size() != ba.size()) return false;

    std::vector<bool> used(ba.size(), false);
    for (const auto& v : ab) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < ba.size(); ++i) {
            if (used[i]) continue;
            const double d = std::abs(v - ba[i]);
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        if (best > cut) return false;
        used[best_i] = true;
    }
    return true;
}

}  // namespace sjq
