#include "sjq/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "sjq/errors.hpp"

namespace sjq {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {
const std::complex<double> kI{0.0, 1.0};

double rising_sqrt(int from, int steps) {
    // sqrt((from+1)(from+2)...(from+steps))
    double p = 1.0;
    for (int k = 1; k <= steps; ++k) p *= from + k;
    return std::sqrt(p);
}

double falling_sqrt(int from, int steps) {
    // sqrt(from (from-1) ... (from-steps+1))
    double p = 1.0;
    for (int k = 0; k < steps; ++k) p *= from - k;
    return std::sqrt(p);
}
}  // namespace

long FockTruncation::dim() const {
    long d = 1;
    for (int i = 0; i < modes; ++i) d *= cutoff + 1;
    return d;
}

long FockTruncation::index_of(const std::vector<int>& occupation) const {
    long idx = 0;
    for (int i = 0; i < modes; ++i) {
        idx = idx * (cutoff + 1) + occupation[i];
    }
    return idx;
}

std::vector<int> FockTruncation::occupation_of(long index) const {
    std::vector<int> occ(modes, 0);
    for (int i = modes - 1; i >= 0; --i) {
        occ[i] = static_cast<int>(index % (cutoff + 1));
        index /= cutoff + 1;
    }
    return occ;
}

bool FockTruncation::is_interior(const std::vector<int>& occupation, int margin) const {
    for (int n : occupation) {
        if (n > cutoff - margin) return false;
    }
    return true;
}

std::vector<long> FockTruncation::interior_indices(int margin) const {
    std::vector<long> out;
    for (long k = 0; k < dim(); ++k) {
        if (is_interior(occupation_of(k), margin)) out.push_back(k);
    }
    return out;
}

Ladders build_ladders(const FockTruncation& t) {
    Ladders out;
    const long d = t.dim();
    for (int mode = 0; mode < t.modes; ++mode) {
        MatrixXcd raise = MatrixXcd::Zero(d, d);
        MatrixXcd lower = MatrixXcd::Zero(d, d);
        for (long k = 0; k < d; ++k) {
            auto occ = t.occupation_of(k);
            if (occ[mode] < t.cutoff) {
                auto up = occ;
                up[mode] += 1;
                raise(t.index_of(up), k) = std::sqrt(static_cast<double>(occ[mode] + 1));
            }
            if (occ[mode] > 0) {
                auto down = occ;
                down[mode] -= 1;
                lower(t.index_of(down), k) = std::sqrt(static_cast<double>(occ[mode]));
            }
        }
        out.raise.push_back({t, std::move(raise), 1});
        out.lower.push_back({t, std::move(lower), 1});
    }
    return out;
}

FockOperator toeplitz_of_symbol(const PolynomialSymbol& f, double hbar,
                                const FockTruncation& t) {
    if (f.modes() != t.modes) throw ModeMismatch("symbol and truncation mode counts differ");
    if (!(hbar > 0)) throw InvalidInput("hbar must be positive");
    const int degree = f.total_degree();
    if (degree > t.cutoff) {
        throw DegreeTooHigh("symbol degree exceeds the truncation cutoff");
    }
    const long d = t.dim();
    MatrixXcd m = MatrixXcd::Zero(d, d);
    for (const auto& [key, coeff] : f.terms()) {
        const std::complex<double> scale =
            coeff * std::pow(hbar, 0.5 * static_cast<double>(key.degree()));
        for (long k = 0; k < d; ++k) {
            auto occ = t.occupation_of(k);
            double amp = 1.0;
            bool alive = true;
            auto target = occ;
            // (a^-)^n (a^+)^m with the raise first; a raise past the cutoff is
            // truncated to zero, a lower past the vacuum vanishes identically
            for (int i = 0; i < t.modes && alive; ++i) {
                if (occ[i] + key.z[i] > t.cutoff) alive = false;
            }
            if (!alive) continue;
            for (int i = 0; i < t.modes && alive; ++i) {
                const int up = occ[i] + key.z[i];
                amp *= rising_sqrt(occ[i], key.z[i]);
                if (up - key.zb[i] < 0) {
                    alive = false;
                    break;
                }
                amp *= falling_sqrt(up, key.zb[i]);
                target[i] = up - key.zb[i];
            }
            if (!alive) continue;
            m(t.index_of(target), k) += scale * amp;
        }
    }
    return {t, std::move(m), degree};
}

FockOperator toeplitz_gaussian(const GaussianSymbol& g, double hbar, const FockTruncation& t) {
    if (g.modes() != t.modes) throw ModeMismatch("symbol and truncation mode counts differ");
    const long d = t.dim();
    MatrixXcd m = MatrixXcd::Zero(d, d);
    for (long k = 0; k < d; ++k) {
        auto occ = t.occupation_of(k);
        double v = g.amplitude;
        for (int i = 0; i < t.modes; ++i) {
            v *= std::pow(g.variances[i] / (g.variances[i] + hbar), occ[i] + 1);
        }
        m(k, k) = v;
    }
    return {t, std::move(m), 0};
}

namespace {

struct LadderBasisElement {
    std::vector<int> m;  // raise exponents
    std::vector<int> n;  // lower exponents
    int degree;
};

// all (m, n) with |m| + |n| <= degree over `modes` modes
std::vector<LadderBasisElement> ladder_basis(int modes, int degree) {
    std::vector<LadderBasisElement> out;
    std::vector<int> exps(2 * modes, 0);
    while (true) {
        int total = 0;
        for (int e : exps) total += e;
        if (total <= degree) {
            LadderBasisElement el;
            el.m.assign(exps.begin(), exps.begin() + modes);
            el.n.assign(exps.begin() + modes, exps.end());
            el.degree = total;
            out.push_back(std::move(el));
        }
        int i = 0;
        while (i < 2 * modes && exps[i] == degree) exps[i++] = 0;
        if (i == 2 * modes) break;
        ++exps[i];
    }
    return out;
}

}  // namespace

PolynomialSymbol dequantize(const FockOperator& op, double hbar, int degree, double tol) {
    if (!(hbar > 0)) throw InvalidInput("hbar must be positive");
    const FockTruncation& t = op.trunc;
    if (degree < 0) degree = op.valid_degree;
    if (degree < 0 || t.cutoff < 2 * degree) {
        throw DegreeTooHigh("cutoff too small to recover a degree-" + std::to_string(degree) +
                            " ladder polynomial from interior columns");
    }

    const auto basis = ladder_basis(t.modes, degree);
    const auto interior = t.interior_indices(degree);
    const int nb = static_cast<int>(basis.size());

    // value of hbar^{deg/2} (a^+)^m (a^-)^n at column k; the row is k - n + m
    auto element = [&](const LadderBasisElement& el, const std::vector<int>& occ, long& row,
                       double& value) {
        double amp = std::pow(hbar, 0.5 * el.degree);
        auto target = occ;
        for (int i = 0; i < t.modes; ++i) {
            if (occ[i] - el.n[i] < 0) return false;
            amp *= falling_sqrt(occ[i], el.n[i]);
            target[i] = occ[i] - el.n[i] + el.m[i];
            if (target[i] > t.cutoff) return false;
            amp *= rising_sqrt(occ[i] - el.n[i], el.m[i]);
        }
        row = t.index_of(target);
        value = amp;
        return true;
    };

    MatrixXd normal = MatrixXd::Zero(nb, nb);
    VectorXcd rhs = VectorXcd::Zero(nb);
    for (long k : interior) {
        const auto occ = t.occupation_of(k);
        std::vector<std::pair<int, std::pair<long, double>>> cells;
        for (int p = 0; p < nb; ++p) {
            long row;
            double value;
            if (element(basis[p], occ, row, value)) {
                cells.push_back({p, {row, value}});
            }
        }
        for (const auto& [p, cp] : cells) {
            rhs[p] += cp.second * op.matrix(cp.first, k);
            for (const auto& [q, cq] : cells) {
                if (cq.first == cp.first) normal(p, q) += cp.second * cq.second;
            }
        }
    }

    Eigen::LDLT<MatrixXd> solver(normal);
    if (solver.info() != Eigen::Success) {
        throw NotPolynomial("normal equations for ladder recovery are degenerate");
    }
    VectorXd c_re = solver.solve(rhs.real());
    VectorXd c_im = solver.solve(rhs.imag());

    // residual against the full interior columns, catching any matrix content
    // that no degree-bounded ladder polynomial can produce
    double resid_sq = 0.0;
    double scale_sq = 0.0;
    for (long k : interior) {
        const auto occ = t.occupation_of(k);
        VectorXcd predicted = VectorXcd::Zero(t.dim());
        for (int p = 0; p < nb; ++p) {
            long row;
            double value;
            if (element(basis[p], occ, row, value)) {
                predicted[row] += std::complex<double>(c_re[p], c_im[p]) * value;
            }
        }
        resid_sq += (op.matrix.col(k) - predicted).squaredNorm();
        scale_sq += op.matrix.col(k).squaredNorm();
    }
    const double scale = std::max(std::sqrt(scale_sq), 1.0);
    if (std::sqrt(resid_sq) > tol * scale) {
        throw NotPolynomial("operator does not match a ladder polynomial of degree " +
                            std::to_string(degree) + " on the interior");
    }

    PolynomialSymbol f(t.modes);
    for (int p = 0; p < nb; ++p) {
        f.add_term(MonomialKey{basis[p].m, basis[p].n}, {c_re[p], c_im[p]});
    }
    return f;
}

double ProjectorSymbol::operator()(const VectorXcd& z) const {
    if (z.size() != static_cast<Eigen::Index>(occupation.size())) {
        throw ModeMismatch("evaluation point has wrong mode count");
    }
    double out = std::exp(-z.squaredNorm() / hbar);
    for (std::size_t i = 0; i < occupation.size(); ++i) {
        double f = 1.0;
        const double w = std::norm(z[static_cast<Eigen::Index>(i)]) / hbar;
        for (int k = 1; k <= occupation[i]; ++k) f *= w / k;
        out *= f;
    }
    return out;
}

ProjectorSymbol dequantize_projector(const std::vector<int>& occupation, double hbar) {
    if (!(hbar > 0)) throw InvalidInput("hbar must be positive");
    for (int n : occupation) {
        if (n < 0) throw InvalidInput("occupation numbers must be nonnegative");
    }
    return ProjectorSymbol{occupation, hbar};
}

FockOperator occupation_projector(const FockTruncation& t, const std::vector<int>& occupation) {
    const long k = t.index_of(occupation);
    MatrixXcd m = MatrixXcd::Zero(t.dim(), t.dim());
    m(k, k) = 1.0;
    return {t, std::move(m), 0};
}

double weyl_tail_bound(const VectorXcd& phi, double hbar, const FockTruncation& t) {
    double tail = 0.0;
    for (int i = 0; i < phi.size(); ++i) {
        const double mean = hbar * std::norm(phi[i]);
        double term = std::exp(-mean);
        double cdf = term;
        for (int j = 1; j <= t.cutoff; ++j) {
            term *= mean / j;
            cdf += term;
        }
        tail += std::max(0.0, 1.0 - cdf);
    }
    return tail;
}

FockOperator weyl_generator(const VectorXcd& phi, double hbar, const FockTruncation& t,
                            double tail_tol) {
    if (phi.size() != t.modes) throw ModeMismatch("covector and truncation mode counts differ");
    if (!(hbar > 0)) throw InvalidInput("hbar must be positive");
    const double tail = weyl_tail_bound(phi, hbar, t);
    if (tail > tail_tol) {
        throw TruncationTooSmall("displaced-vacuum tail " + std::to_string(tail) +
                                 " exceeds tolerance; raise the cutoff");
    }
    Ladders ladders = build_ladders(t);
    const long d = t.dim();
    MatrixXcd generator = MatrixXcd::Zero(d, d);
    for (int i = 0; i < t.modes; ++i) {
        generator += phi[i] * ladders.raise[i].matrix + std::conj(phi[i]) * ladders.lower[i].matrix;
    }
    generator *= std::sqrt(hbar);
    generator = 0.5 * (generator + generator.adjoint());

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(generator);
    VectorXcd phase(d);
    for (long k = 0; k < d; ++k) phase[k] = std::exp(kI * es.eigenvalues()[k]);
    MatrixXcd w = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
    return {t, std::move(w), 0};
}

FockOperator toeplitz_exponential(const VectorXcd& phi, double hbar, const FockTruncation& t,
                                  double tail_tol) {
    FockOperator w = weyl_generator(phi, hbar, t, tail_tol);
    w.matrix *= std::exp(-0.5 * hbar * phi.squaredNorm());
    return w;
}

VectorXcd coherent_vector(const FockTruncation& t, double hbar, const VectorXcd& z) {
    if (z.size() != t.modes) throw ModeMismatch("point and truncation mode counts differ");
    const long d = t.dim();
    VectorXcd v(d);
    const double norm_factor = std::exp(-0.5 * z.squaredNorm() / hbar);
    for (long k = 0; k < d; ++k) {
        auto occ = t.occupation_of(k);
        std::complex<double> amp = norm_factor;
        for (int i = 0; i < t.modes; ++i) {
            for (int j = 1; j <= occ[i]; ++j) {
                amp *= z[i] / std::sqrt(hbar * j);
            }
        }
        v[k] = amp;
    }
    return v;
}

std::complex<double> berezin_symbol_at(const FockOperator& op, double hbar, const VectorXcd& z) {
    VectorXcd c = coherent_vector(op.trunc, hbar, z);
    return c.dot(op.matrix * c);  // Eigen's dot conjugates the left argument
}

TracePairing trace_pairing_check(const FockOperator& a, const GaussianSymbol& f, double hbar) {
    if (f.modes() != a.trunc.modes) throw ModeMismatch("symbol and operator mode counts differ");
    FockOperator tf = toeplitz_gaussian(f, hbar, a.trunc);
    TracePairing out;
    out.lhs = (a.matrix * tf.matrix).trace();

    PolynomialSymbol symbol;
    try {
        symbol = dequantize(a, hbar);
    } catch (const NotPolynomial&) {
        throw NoClosedForm("operator has no polynomial dequantization; no closed-form pairing");
    } catch (const DegreeTooHigh&) {
        throw NoClosedForm("truncation too small to dequantize the operator");
    }

    // (2 pi hbar)^{-N} integral z^m zb^m f dvol = amplitude prod_i m_i!
    // beta_i^{m_i+1} / hbar  (volume element 2 dx dy per mode)
    std::complex<double> rhs = 0.0;
    for (const auto& [key, c] : symbol.terms()) {
        if (key.z != key.zb) continue;  // odd angular moments vanish
        double moment = 1.0;
        for (int i = 0; i < symbol.modes(); ++i) {
            double fact = 1.0;
            for (int k = 1; k <= key.z[i]; ++k) fact *= k;
            moment *= fact * std::pow(f.variances[i], key.z[i] + 1) / hbar;
        }
        rhs += c * moment;
    }
    out.rhs = f.amplitude * rhs;
    out.diff = std::abs(out.lhs - out.rhs);
    return out;
}

TracePairing trace_pairing_projector(const std::vector<int>& occupation, const GaussianSymbol& f,
                                     double hbar, const FockTruncation& t) {
    if (f.modes() != t.modes) throw ModeMismatch("symbol and truncation mode counts differ");
    FockOperator proj = occupation_projector(t, occupation);
    FockOperator tf = toeplitz_gaussian(f, hbar, t);
    TracePairing out;
    out.lhs = (proj.matrix * tf.matrix).trace();
    double rhs = f.amplitude;
    for (int i = 0; i < t.modes; ++i) {
        rhs *= std::pow(f.variances[i] / (f.variances[i] + hbar), occupation[i] + 1);
    }
    out.rhs = rhs;
    out.diff = std::abs(out.lhs - out.rhs);
    return out;
}

}  // namespace sjq
