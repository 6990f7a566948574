#ifndef SJQ_CAUSET_HPP
#define SJQ_CAUSET_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sjq/kahler.hpp"

namespace sjq {

// Finite causal set: strict partial order as a dense boolean matrix,
// relation(x, y) true iff x strictly precedes y. Always stored transitively
// closed. coords, when present, are (t, x) embedding positions.
struct CausalSet {
    int n = 0;
    std::vector<std::uint8_t> rel;  // row-major n*n
    std::optional<std::vector<std::array<double, 2>>> coords;

    bool precedes(int x, int y) const { return rel[static_cast<std::size_t>(x) * n + y] != 0; }
    void set(int x, int y) { rel[static_cast<std::size_t>(x) * n + y] = 1; }

    // Relation matrix C with C(x,y) = 1 iff x precedes y.
    MatrixXd relation_matrix() const;
};

// Retarded Green operator plus a record of the conventions baked into it.
// The field equations on a causal set do not fix these, so they are data.
struct GreensData {
    MatrixXd retarded;
    struct Convention {
        double coupling = 0.5;
        std::string description;
    } convention;
};

// Closes the relation transitively; throws CycleDetected on any loop.
void transitive_close(CausalSet& c);

// Accepts "i<j" or "i j" per line; '#' starts a comment. Indices may appear
// in any order; n is one past the largest index unless a "n=<count>" line
// raises it.
CausalSet parse_causal_set(const std::string& text);

// Poisson sprinkling into the unit-volume causal diamond of 2d Minkowski
// space, using lightcone coordinates u,v uniform on [0,1]^2. Deterministic
// for a given seed on every platform: mt19937_64 with inversion sampling
// (53-bit uniforms, chunked-product Poisson counts).
CausalSet sprinkle_diamond_2d(double density, std::uint64_t seed);

// K_R = coupling * C^T: entry (x,y) nonzero iff y precedes x.
GreensData retarded_green_2d_massless(const CausalSet& c, double coupling = 0.5);

// E_off = K_R - K_R^T, checked gram-antisymmetric against `space`.
MatrixXd pauli_jordan_from_green(const GreensData& g, const InnerProductSpace& space);

}  // namespace sjq

#endif
