#include <doctest.h>

#include <cmath>
#include <random>

#include "sjq/causet.hpp"
#include "sjq/errors.hpp"
#include "support.hpp"

using namespace sjq;

TEST_CASE("parse a two-chain") {
    auto c = parse_causal_set("0<1\n");
    REQUIRE(c.n == 2);
    CHECK(c.precedes(0, 1));
    CHECK_FALSE(c.precedes(1, 0));
    CHECK_FALSE(c.precedes(0, 0));
}

TEST_CASE("parse computes the transitive closure") {
    auto c = parse_causal_set("0<1\n1<2\n");
    REQUIRE(c.n == 3);
    CHECK(c.precedes(0, 2));
}

TEST_CASE("parse rejects cycles and malformed lines") {
    CHECK_THROWS_AS(parse_causal_set("0<1\n1<0\n"), CycleDetected);
    CHECK_THROWS_AS(parse_causal_set("2<2\n"), CycleDetected);
    CHECK_THROWS_AS(parse_causal_set("zero<one\n"), MalformedInput);
    CHECK_THROWS_AS(parse_causal_set("5\n"), MalformedInput);
}

TEST_CASE("closure is idempotent on a random dag") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int n = 50;
    std::string text = "n=" + std::to_string(n) + "\n";
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (coin(rng) < 0.06) {
                text += std::to_string(i) + "<" + std::to_string(j) + "\n";
            }
        }
    }
    auto c = parse_causal_set(text);
    auto twice = c;
    transitive_close(twice);
    CHECK(twice.rel == c.rel);
}

TEST_CASE("sprinkling with a tiny density yields a valid, possibly empty set") {
    auto c = sprinkle_diamond_2d(1e-9, 5);
    CHECK(c.n >= 0);
    transitive_close(c);  // must not throw
}

TEST_CASE("lightcone order of two handcrafted points") {
    // two timelike separated points: both lightcone coordinates increase
    CausalSet c;
    c.n = 2;
    c.rel.assign(4, 0);
    c.coords = {{{0.1, 0.0}, {0.8, 0.05}}};
    const auto& p = (*c.coords)[0];
    const auto& q = (*c.coords)[1];
    REQUIRE(std::abs(q[1] - p[1]) < q[0] - p[0]);
    const double u0 = (p[0] + p[1]), v0 = (p[0] - p[1]);
    const double u1 = (q[0] + q[1]), v1 = (q[0] - q[1]);
    if (u0 < u1 && v0 < v1) c.set(0, 1);
    CHECK(c.precedes(0, 1));
    CHECK_FALSE(c.precedes(1, 0));
}

TEST_CASE("sprinkled element count follows poisson statistics") {
    auto c = sprinkle_diamond_2d(100.0, 7);
    // mean 100, sd 10: 4 sigma band
    CHECK(c.n > 60);
    CHECK(c.n < 140);
    // antisymmetry of the relation
    for (int x = 0; x < c.n; ++x) {
        for (int y = 0; y < c.n; ++y) {
            if (x != y) CHECK_FALSE((c.precedes(x, y) && c.precedes(y, x)));
        }
    }
}

TEST_CASE("sprinkling is deterministic per seed") {
    auto a = sprinkle_diamond_2d(40.0, 99);
    auto b = sprinkle_diamond_2d(40.0, 99);
    CHECK(a.n == b.n);
    CHECK(a.rel == b.rel);
    REQUIRE(a.coords.has_value());
    REQUIRE(b.coords.has_value());
    for (int i = 0; i < a.n; ++i) {
        CHECK((*a.coords)[i] == (*b.coords)[i]);
    }
}

TEST_CASE("retarded green operator support and scaling") {
    auto empty = retarded_green_2d_massless(CausalSet{});
    CHECK(empty.retarded.size() == 0);

    auto chain = parse_causal_set("0<1\n");
    auto g = retarded_green_2d_massless(chain, 0.5);
    CHECK(g.retarded(1, 0) == 0.5);
    CHECK(g.retarded(0, 1) == 0.0);
    CHECK(g.retarded(0, 0) == 0.0);
    CHECK(g.retarded(1, 1) == 0.0);
    // retarded support: nonzero only when the column element precedes the row
    for (int x = 0; x < chain.n; ++x) {
        for (int y = 0; y < chain.n; ++y) {
            if (g.retarded(x, y) != 0.0) CHECK(chain.precedes(y, x));
        }
    }
}

TEST_CASE("pauli-jordan assembly is exactly antisymmetric") {
    GreensData zero;
    zero.retarded = MatrixXd::Zero(3, 3);
    CHECK(pauli_jordan_from_green(zero, InnerProductSpace::standard(3)).norm() == 0.0);

    GreensData link;
    link.retarded = MatrixXd::Zero(2, 2);
    link.retarded(1, 0) = 1.0;
    MatrixXd e = pauli_jordan_from_green(link, InnerProductSpace::standard(2));
    MatrixXd expected(2, 2);
    expected << 0, -1, 1, 0;
    CHECK((e - expected).norm() == 0.0);

    GreensData bad;
    bad.retarded = MatrixXd::Zero(3, 2);
    CHECK_THROWS_AS(pauli_jordan_from_green(bad, InnerProductSpace::standard(3)), ShapeMismatch);
}

TEST_CASE("random poset feeds the decomposition pipeline") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int n = 20;
    std::string text = "n=" + std::to_string(n) + "\n";
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (coin(rng) < 0.2) text += std::to_string(i) + "<" + std::to_string(j) + "\n";
        }
    }
    auto c = parse_causal_set(text);
    std::normal_distribution<double> gauss(0.0, 1.0);
    GreensData g = retarded_green_2d_massless(c, 0.5);
    // randomize magnitudes while preserving retarded support
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            if (g.retarded(x, y) != 0.0) g.retarded(x, y) *= 1.0 + 0.3 * gauss(rng);
        }
    }
    auto space = InnerProductSpace::standard(n);
    MatrixXd e_off = pauli_jordan_from_green(g, space);
    CHECK((e_off + e_off.transpose()).norm() == 0.0);

    try {
        auto r = restrict_to_image(e_off, space.gram);
        auto k = polar_decompose(r.restricted);
        CHECK(k.thetas.minCoeff() > 0);
        CHECK((k.j * k.j + MatrixXd::Identity(k.space.dim, k.space.dim)).norm() < 1e-9);
    } catch (const OddRank&) {
        // acceptable outcome for a noisy rank decision; reported, not hidden
        MESSAGE("restriction reported an odd rank for this draw");
    }
}

TEST_CASE("sprinkled operators restrict to an even rank in nearly all seeds") {
    int even = 0, total = 50;
    for (int seed = 0; seed < total; ++seed) {
        auto c = sprinkle_diamond_2d(30.0, static_cast<std::uint64_t>(seed));
        if (c.n < 2) {
            ++even;  // empty or singleton has a trivial (empty) even-rank image
            continue;
        }
        auto g = retarded_green_2d_massless(c, 0.5);
        auto space = InnerProductSpace::standard(c.n);
        MatrixXd e_off = pauli_jordan_from_green(g, space);
        try {
            auto r = restrict_to_image(e_off, space.gram);
            if (r.restricted.matrix.rows() % 2 == 0) ++even;
        } catch (const OddRank&) {
        } catch (const DegenerateInput&) {
            ++even;  // zero operator: empty image, even
        }
    }
    CHECK(even >= 48);  // >= 95 percent of seeds
}
