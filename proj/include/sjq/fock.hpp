#ifndef SJQ_FOCK_HPP
#define SJQ_FOCK_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "sjq/symbols.hpp"

namespace sjq {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Truncated multi-mode occupation basis. States are multi-indices
// (n_1, ..., n_N) with n_i <= cutoff, enumerated lexicographically with n_1
// slowest, so index = sum_i n_i (cutoff+1)^(N-1-i).
//
// Operator identities built from degree-d ladder polynomials hold exactly on
// the interior columns (all n_i <= cutoff - d); the boundary is truncation
// artifact by construction, which is why FockOperator carries valid_degree.
struct FockTruncation {
    int modes = 1;
    int cutoff = 4;

    long dim() const;
    long index_of(const std::vector<int>& occupation) const;
    std::vector<int> occupation_of(long index) const;
    bool is_interior(const std::vector<int>& occupation, int margin) const;
    std::vector<long> interior_indices(int margin) const;

    friend bool operator==(const FockTruncation& a, const FockTruncation& b) {
        return a.modes == b.modes && a.cutoff == b.cutoff;
    }
};

struct FockOperator {
    FockTruncation trunc;
    MatrixXcd matrix;
    int valid_degree = 0;
};

struct Ladders {
    std::vector<FockOperator> raise;
    std::vector<FockOperator> lower;
};

// raise[i]|..n_i..> = sqrt(n_i+1)|..n_i+1..> (zero past the cutoff),
// lower[i]|..n_i..> = sqrt(n_i)|..n_i-1..>; adjoint pairs on the truncation.
Ladders build_ladders(const FockTruncation& t);

// Anti-normal quantization: z^m zb^n -> hbar^((|m|+|n|)/2) (a^-)^n (a^+)^m,
// extended linearly. Matrix elements match truncated ladder products.
FockOperator toeplitz_of_symbol(const PolynomialSymbol& f, double hbar,
                                const FockTruncation& t);

// Exact diagonal Toeplitz operator of a Gaussian:
// entries amplitude * prod_i (beta_i/(beta_i+hbar))^(n_i+1).
FockOperator toeplitz_gaussian(const GaussianSymbol& g, double hbar, const FockTruncation& t);

// Recovers the normal-ordered ladder polynomial of degree <= `degree`
// (default: the operator's valid_degree) from interior columns by least
// squares and maps hbar^((m+n)/2) (a^+)^m (a^-)^n -> z^m zb^n. Throws
// NotPolynomial when the interior residual exceeds tol * |A|.
PolynomialSymbol dequantize(const FockOperator& op, double hbar, int degree = -1,
                            double tol = 1e-8);

// Closed-form dequantization of the occupation projector |j><j|:
// z -> exp(-|z|^2/hbar) prod_k (|z_k|^2/hbar)^{j_k} / j_k!.
struct ProjectorSymbol {
    std::vector<int> occupation;
    double hbar = 1.0;
    double operator()(const VectorXcd& z) const;
};
ProjectorSymbol dequantize_projector(const std::vector<int>& occupation, double hbar);

FockOperator occupation_projector(const FockTruncation& t, const std::vector<int>& occupation);

// Per-mode Poisson(hbar |phi_i|^2) mass beyond the cutoff; the displaced
// vacuum's occupation distribution, so it bounds what the truncation loses.
double weyl_tail_bound(const VectorXcd& phi, double hbar, const FockTruncation& t);

// W(phi) = exp(i Phi), Phi = sqrt(hbar) sum_i (phi_i raise_i + conj(phi_i)
// lower_i), exponentiated through the Hermitian eigendecomposition so the
// truncated operator is exactly unitary. Throws TruncationTooSmall when the
// tail bound exceeds tail_tol.
FockOperator weyl_generator(const VectorXcd& phi, double hbar, const FockTruncation& t,
                            double tail_tol = 1e-8);

// T(e^{i phi}) = exp(-(hbar/2)|phi|^2) W(phi)
FockOperator toeplitz_exponential(const VectorXcd& phi, double hbar, const FockTruncation& t,
                                  double tail_tol = 1e-8);

// Truncated coherent vector with the untruncated normalization, and the
// covariant symbol <z|A|z> it induces; sigma(A) is its value at z = 0.
VectorXcd coherent_vector(const FockTruncation& t, double hbar, const VectorXcd& z);
std::complex<double> berezin_symbol_at(const FockOperator& op, double hbar, const VectorXcd& z);

struct TracePairing {
    std::complex<double> lhs;
    std::complex<double> rhs;
    double diff = 0.0;
};

// Both sides of Tr(A T(f)) = (2 pi hbar)^{-N} integral of Xi(A) f dvol for a
// Gaussian f, with the right side in closed form through Gaussian moments of
// the dequantized polynomial. Throws NoClosedForm when A cannot be
// dequantized to a polynomial.
TracePairing trace_pairing_check(const FockOperator& a, const GaussianSymbol& f, double hbar);

// Same pairing for A = |j><j|, where both sides are exact:
// lhs = rhs = amplitude * prod_i (beta_i/(beta_i+hbar))^(j_i+1).
TracePairing trace_pairing_projector(const std::vector<int>& occupation,
                                     const GaussianSymbol& f, double hbar,
                                     const FockTruncation& t);

}  // namespace sjq

#endif
