#ifndef SJQ_CFIELD_HPP
#define SJQ_CFIELD_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "sjq/fock.hpp"
#include "sjq/symbols.hpp"

namespace sjq {

// Strictly decreasing positive values followed by the classical point 0.
struct HbarGrid {
    std::vector<double> values;

    static HbarGrid geometric(double start = 1.0, double stop = std::pow(2.0, -16),
                              double factor = 0.5);
    // "1:2^-16" means start 1, halve down to 2^-16, then append 0
    static HbarGrid parse(const std::string& spec);

    std::size_t size() const { return values.size(); }
    void validate() const;
};

// A rule assigning an operator to every hbar > 0 and a function to hbar = 0.
struct Section {
    enum class Kind { Identity, ToeplitzPolynomial, ToeplitzGaussian, ToeplitzExponential, Weyl };

    Kind kind = Kind::Identity;
    int n_modes = 1;
    PolynomialSymbol poly;
    GaussianSymbol gauss;
    VectorXcd phi;

    static Section identity(int modes);
    static Section toeplitz(PolynomialSymbol f);
    static Section toeplitz(GaussianSymbol g);
    static Section toeplitz_exponential(VectorXcd phi);
    static Section weyl(VectorXcd phi);

    int modes() const { return n_modes; }
    FockOperator at(double hbar, const FockTruncation& t) const;
    std::complex<double> classical_value(const VectorXcd& z) const;
};

// Materialized samples over a grid.
struct SectionSample {
    HbarGrid grid;
    Section rule;
    FockTruncation trunc;

    FockOperator at(double hbar) const { return rule.at(hbar, trunc); }
};

struct NormFunctionResult {
    std::vector<std::pair<double, double>> values;  // (hbar, norm), grid order
    double max_jump = 0.0;
};

// Norm of the section along the grid. Operator norms are spectral norms; for
// polynomial sections the matrix is first restricted to the interior (margin
// valid_degree) since the boundary rows are truncation artifacts. The
// classical entry is the sup of |f| over the polar sampling of the disk
// |z_i| <= domain_radius.
NormFunctionResult norm_function(const SectionSample& s, double domain_radius = 2.0);

// Coherent lower estimate sup_{|z| <= radius} |<z|T(f)|z>| of the operator
// norm of a polynomial Toeplitz operator; converges to sup |f| in the
// classical limit while the cutoff covers occupation radius^2/hbar.
double toeplitz_norm_coherent_estimate(const PolynomialSymbol& f, double hbar,
                                       const FockTruncation& t, double radius,
                                       int radial_samples = 24, int angular_samples = 16);

struct ExpansionResult {
    std::vector<PolynomialSymbol> coefficients;        // polynomial sections
    std::vector<std::complex<double>> weyl_amplitudes; // Weyl sections: w_j / e^{i phi}
    std::vector<std::pair<double, double>> residuals;  // (hbar, |Xi(s) - sum| / hbar^k)
};

// Order-k dequantization expansion. Polynomial Toeplitz sections expand with
// the heat coefficients (1/j!) Delta^j f and terminate; Weyl sections expand
// with (1/j!)(-|phi|^2/2)^j e^{i phi}. Other sections throw NotExpandable.
ExpansionResult dequantization_expansion(const SectionSample& s, int order);

struct LimitTable {
    std::vector<std::pair<double, double>> distances;  // (hbar, sup distance)
    bool strictly_decreasing = false;
};

// Sup-norm distance between a Gaussian and its transform along the grid,
// closed form (exact for one mode, radial scan otherwise). The distance is 0
// at hbar = 0 and must shrink monotonically along a descending grid.
LimitTable classical_limit_berezin(const GaussianSymbol& f, const HbarGrid& grid);

struct StateFieldResult {
    std::vector<std::pair<double, std::complex<double>>> values;
    double max_jump = 0.0;
};

// sigma_hbar(s(hbar)) along the grid: the covariant symbol at the origin for
// hbar > 0 (the vacuum matrix element) and the classical evaluation at 0.
StateFieldResult state_field(const SectionSample& s);

}  // namespace sjq

#endif
