#include "sjq/causet.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "sjq/errors.hpp"

namespace sjq {

MatrixXd CausalSet::relation_matrix() const {
    MatrixXd c = MatrixXd::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            if (precedes(x, y)) c(x, y) = 1.0;
        }
    }
    return c;
}

void transitive_close(CausalSet& c) {
    const int n = c.n;
    for (int k = 0; k < n; ++k) {
        for (int x = 0; x < n; ++x) {
            if (!c.precedes(x, k)) continue;
            for (int y = 0; y < n; ++y) {
                if (c.precedes(k, y)) c.set(x, y);
            }
        }
    }
    for (int x = 0; x < n; ++x) {
        if (c.precedes(x, x)) {
            throw CycleDetected("causal relation contains a cycle through element " +
                                std::to_string(x));
        }
    }
}

CausalSet parse_causal_set(const std::string& text) {
    std::vector<std::pair<int, int>> edges;
    int n = 0;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        for (char ch : line) {
            if (!std::isspace(static_cast<unsigned char>(ch))) trimmed += ch;
        }
        if (trimmed.empty()) continue;
        if (trimmed.rfind("n=", 0) == 0) {
            try {
                n = std::max(n, std::stoi(trimmed.substr(2)));
            } catch (const std::exception&) {
                throw MalformedInput("bad element count on line " + std::to_string(lineno));
            }
            continue;
        }
        std::size_t sep = trimmed.find('<');
        std::string a, b;
        if (sep != std::string::npos) {
            a = trimmed.substr(0, sep);
            b = trimmed.substr(sep + 1);
        } else {
            std::istringstream pair(line);
            if (!(pair >> a >> b)) {
                throw MalformedInput("expected 'i<j' or 'i j' on line " + std::to_string(lineno));
            }
        }
        int i, j;
        try {
            i = std::stoi(a);
            j = std::stoi(b);
        } catch (const std::exception&) {
            throw MalformedInput("non-integer element on line " + std::to_string(lineno));
        }
        if (i < 0 || j < 0) throw MalformedInput("negative element on line " + std::to_string(lineno));
        if (i == j) throw CycleDetected("self-relation " + std::to_string(i) + "<" + std::to_string(i));
        edges.emplace_back(i, j);
        n = std::max(n, std::max(i, j) + 1);
    }
    CausalSet c;
    c.n = n;
    c.rel.assign(static_cast<std::size_t>(n) * n, 0);
    for (auto [i, j] : edges) c.set(i, j);
    transitive_close(c);
    return c;
}

namespace {

double uniform53(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Multiplication method, split into chunks so the threshold exp(-chunk)
// stays representable. Fully determined by the raw mt19937_64 stream, unlike
// std::poisson_distribution whose algorithm is implementation-defined.
int poisson_count(double mean, std::mt19937_64& rng) {
    int total = 0;
    double remaining = mean;
    while (remaining > 0.0) {
        const double chunk = std::min(remaining, 500.0);
        remaining -= chunk;
        const double bound = std::exp(-chunk);
        double product = uniform53(rng);
        int k = 0;
        while (product > bound) {
            product *= uniform53(rng);
            ++k;
        }
        total += k;
    }
    return total;
}

}  // namespace

CausalSet sprinkle_diamond_2d(double density, std::uint64_t seed) {
    if (!(density > 0)) throw InvalidInput("sprinkling density must be positive");
    std::mt19937_64 rng(seed);
    const int n = poisson_count(density, rng);

    std::vector<std::array<double, 2>> uv(n);
    for (int i = 0; i < n; ++i) {
        uv[i][0] = uniform53(rng);
        uv[i][1] = uniform53(rng);
    }
    // sort by u+v (a time function) so the relation is lower triangular-ish;
    // purely cosmetic, the order relation below does not rely on it
    std::sort(uv.begin(), uv.end(), [](const auto& a, const auto& b) {
        return a[0] + a[1] < b[0] + b[1];
    });

    CausalSet c;
    c.n = n;
    c.rel.assign(static_cast<std::size_t>(n) * n, 0);
    std::vector<std::array<double, 2>> coords(n);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        coords[i] = {(uv[i][0] + uv[i][1]) * inv_sqrt2, (uv[i][0] - uv[i][1]) * inv_sqrt2};
    }
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            if (uv[x][0] < uv[y][0] && uv[x][1] < uv[y][1]) c.set(x, y);
        }
    }
    c.coords = std::move(coords);
    return c;  // lightcone order is already transitive and acyclic
}

GreensData retarded_green_2d_massless(const CausalSet& c, double coupling) {
    GreensData g;
    g.retarded = coupling * c.relation_matrix().transpose();
    g.convention.coupling = coupling;
    g.convention.description =
        "K_R = coupling * transpose(causal matrix); massless 2d diamond convention";
    return g;
}

MatrixXd pauli_jordan_from_green(const GreensData& g, const InnerProductSpace& space) {
    if (g.retarded.rows() != g.retarded.cols() || g.retarded.rows() != space.dim) {
        throw ShapeMismatch("Green operator shape does not match the configuration space");
    }
    MatrixXd e_off = g.retarded - g.retarded.transpose();
    const MatrixXd ge = space.gram * e_off;
    const double scale = std::max(ge.norm(), 1e-300);
    if ((ge + e_off.transpose() * space.gram).norm() > 1e-10 * scale) {
        throw InvalidInput("derived operator is not gram-antisymmetric");
    }
    return e_off;
}

}  // namespace sjq
