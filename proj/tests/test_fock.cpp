#include <doctest.h>

#include <random>

#include <filesystem>
#include <sstream>

#include "sjq/errors.hpp"
#include "sjq/fock.hpp"
#include "sjq/matrix_io.hpp"
#include "support.hpp"

using namespace sjq;

namespace {

const std::complex<double> kOne{1.0, 0.0};

// largest column-wise deviation over interior columns
double interior_column_diff(const MatrixXcd& a, const MatrixXcd& b, const FockTruncation& t,
                            int margin) {
    double worst = 0.0;
    for (long k : t.interior_indices(margin)) {
        worst = std::max(worst, (a.col(k) - b.col(k)).norm());
    }
    return worst;
}

MatrixXcd matrix_power(const MatrixXcd& m, int p) {
    MatrixXcd out = MatrixXcd::Identity(m.rows(), m.cols());
    for (int i = 0; i < p; ++i) out = out * m;
    return out;
}

double binomial(int n, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
    return out;
}

PolynomialSymbol random_symbol(int modes, int degree, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(0, degree);
    PolynomialSymbol f(modes);
    for (int t = 0; t < 5; ++t) {
        MonomialKey key{std::vector<int>(modes, 0), std::vector<int>(modes, 0)};
        int budget = degree;
        for (int i = 0; i < modes; ++i) {
            key.z[i] = std::min(expo(rng), budget);
            budget -= key.z[i];
            key.zb[i] = std::min(expo(rng), budget);
            budget -= key.zb[i];
        }
        f.add_term(key, {coeff(rng), coeff(rng)});
    }
    return f;
}

}  // namespace

TEST_CASE("occupation enumeration is a lexicographic bijection") {
    FockTruncation t{2, 3};
    CHECK(t.dim() == 16);
    CHECK(t.index_of({0, 0}) == 0);
    CHECK(t.index_of({0, 1}) == 1);
    CHECK(t.index_of({1, 0}) == 4);
    for (long k = 0; k < t.dim(); ++k) {
        CHECK(t.index_of(t.occupation_of(k)) == k);
    }
    CHECK(t.is_interior({1, 1}, 2));
    CHECK_FALSE(t.is_interior({2, 1}, 2));
}

TEST_CASE("single-mode ladder matrices") {
    FockTruncation t{1, 2};
    auto ladders = build_ladders(t);
    MatrixXcd expected = MatrixXcd::Zero(3, 3);
    expected(0, 1) = 1.0;
    expected(1, 2) = std::sqrt(2.0);
    CHECK((ladders.lower[0].matrix - expected).norm() == 0.0);
    CHECK((ladders.raise[0].matrix - expected.adjoint()).norm() == 0.0);
}

TEST_CASE("ladder matrices match the golden file") {
    FockTruncation t{1, 3};
    auto ladders = build_ladders(t);
    auto golden = read_fock_operator_json(std::string(SJQ_TEST_DATA_DIR) +
                                          "/lower_ladder_n1_c3.json");
    CHECK(golden.trunc == t);
    CHECK((ladders.lower[0].matrix - golden.matrix).norm() == 0.0);
}

TEST_CASE("operator dumps round-trip through json and print as csv") {
    FockTruncation t{1, 2};
    auto ladders = build_ladders(t);
    const std::string dir = std::filesystem::temp_directory_path().string();
    const std::string json_path = dir + "/sjq_op_dump.json";
    const std::string csv_path = dir + "/sjq_op_dump.csv";
    write_fock_operator_json(json_path, ladders.raise[0]);
    auto back = read_fock_operator_json(json_path);
    CHECK(back.trunc == t);
    CHECK((back.matrix - ladders.raise[0].matrix).norm() == 0.0);
    CHECK(back.valid_degree == 1);

    write_fock_operator_csv(csv_path, ladders.raise[0]);
    std::istringstream csv(read_text_file(csv_path));
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 1 + t.dim());  // header comment plus one line per row
}

TEST_CASE("ladder commutators on the interior") {
    FockTruncation t{2, 5};
    auto ladders = build_ladders(t);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            MatrixXcd comm = ladders.lower[i].matrix * ladders.raise[j].matrix -
                             ladders.raise[j].matrix * ladders.lower[i].matrix;
            MatrixXcd expected = MatrixXcd::Zero(t.dim(), t.dim());
            if (i == j) expected.setIdentity();
            CHECK(interior_column_diff(comm, expected, t, 2) <= 1e-12);

            MatrixXcd comm_same = ladders.raise[i].matrix * ladders.raise[j].matrix -
                                  ladders.raise[j].matrix * ladders.raise[i].matrix;
            CHECK(comm_same.norm() == 0.0);
        }
    }
}

TEST_CASE("higher commutators in both orderings") {
    // anti-normal: [(a-)^m, (a+)^n] = sum (-1)^{l+1} l! C(m,l) C(n,l) (a-)^{m-l} (a+)^{n-l}
    // normal:      [(a-)^m, (a+)^n] = sum        l! C(m,l) C(n,l) (a+)^{n-l} (a-)^{m-l}
    FockTruncation t{1, 12};
    auto ladders = build_ladders(t);
    const MatrixXcd& up = ladders.raise[0].matrix;
    const MatrixXcd& down = ladders.lower[0].matrix;
    for (int m = 1; m <= 4; ++m) {
        for (int n = 1; n <= 4; ++n) {
            MatrixXcd lhs = matrix_power(down, m) * matrix_power(up, n) -
                            matrix_power(up, n) * matrix_power(down, m);
            MatrixXcd anti = MatrixXcd::Zero(t.dim(), t.dim());
            MatrixXcd normal = MatrixXcd::Zero(t.dim(), t.dim());
            for (int l = 1; l <= std::min(m, n); ++l) {
                double fact = 1.0;
                for (int i = 2; i <= l; ++i) fact *= i;
                const double weight = fact * binomial(m, l) * binomial(n, l);
                anti += std::pow(-1.0, l + 1) * weight *
                        (matrix_power(down, m - l) * matrix_power(up, n - l));
                normal += weight * (matrix_power(up, n - l) * matrix_power(down, m - l));
            }
            CHECK(interior_column_diff(lhs, anti, t, m + n) <= 1e-12 * (1.0 + lhs.norm()));
            CHECK(interior_column_diff(lhs, normal, t, m + n) <= 1e-12 * (1.0 + lhs.norm()));
        }
    }
}

TEST_CASE("anti-normal quantization of basic symbols") {
    FockTruncation t{1, 6};
    auto ladders = build_ladders(t);
    const double hbar = 0.5;

    CHECK(toeplitz_of_symbol(PolynomialSymbol::constant(1, kOne), hbar, t)
              .matrix.isIdentity(1e-15));

    auto tz = toeplitz_of_symbol(PolynomialSymbol::coordinate(1, 0), hbar, t);
    CHECK((tz.matrix - std::sqrt(hbar) * ladders.raise[0].matrix).norm() == 0.0);

    auto zzb = PolynomialSymbol::coordinate(1, 0) * PolynomialSymbol::conj_coordinate(1, 0);
    auto tn = toeplitz_of_symbol(zzb, 1.0, t);
    CHECK((tn.matrix - ladders.lower[0].matrix * ladders.raise[0].matrix).norm() < 1e-14);
    for (long k : t.interior_indices(2)) {
        CHECK(tn.matrix(k, k).real() == doctest::Approx(static_cast<double>(k + 1)));
    }

    auto deep = zzb * zzb * zzb * zzb;  // degree 8 > cutoff
    CHECK_THROWS_AS(toeplitz_of_symbol(deep, hbar, t), DegreeTooHigh);
}

TEST_CASE("quantization respects the involution on the interior") {
    std::mt19937_64 rng(137);
    FockTruncation t{2, 8};
    for (int trial = 0; trial < 5; ++trial) {
        auto f = random_symbol(2, 3, rng);
        auto a = toeplitz_of_symbol(f, 0.7, t);
        auto b = toeplitz_of_symbol(f.conjugated(), 0.7, t);
        // compare on the doubly-interior block where both are artifact-free
        const auto interior = t.interior_indices(3);
        double worst = 0.0;
        for (long r : interior) {
            for (long c : interior) {
                worst = std::max(worst,
                                 std::abs(b.matrix(r, c) - std::conj(a.matrix(c, r))));
            }
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("dequantization inverts the ladder representation") {
    FockTruncation t{1, 8};
    auto ladders = build_ladders(t);
    const double hbar = 0.5;

    auto one = dequantize(
        FockOperator{t, MatrixXcd::Identity(t.dim(), t.dim()), 0}, hbar);
    CHECK(max_coeff_distance(one, PolynomialSymbol::constant(1, kOne)) < 1e-12);

    FockOperator raise{t, std::sqrt(hbar) * ladders.raise[0].matrix, 1};
    CHECK(max_coeff_distance(dequantize(raise, hbar), PolynomialSymbol::coordinate(1, 0)) <
          1e-12);

    // a^- a^+ = a^+ a^- + 1 dequantizes to z zb + 1 at hbar = 1
    FockOperator anti{t, ladders.lower[0].matrix * ladders.raise[0].matrix, 2};
    auto zzb1 = PolynomialSymbol::coordinate(1, 0) * PolynomialSymbol::conj_coordinate(1, 0) +
                PolynomialSymbol::constant(1, kOne);
    CHECK(max_coeff_distance(dequantize(anti, 1.0), zzb1) < 1e-12);

    std::mt19937_64 rng(139);
    MatrixXcd junk = testing::random_complex_matrix(static_cast<int>(t.dim()),
                                                    static_cast<int>(t.dim()), rng);
    CHECK_THROWS_AS(dequantize(FockOperator{t, junk, 2}, hbar), NotPolynomial);
    CHECK_THROWS_AS(dequantize(FockOperator{t, junk, 5}, hbar), DegreeTooHigh);
}

TEST_CASE("quantize-dequantize round trip is the heat smoothing") {
    std::mt19937_64 rng(149);
    for (int modes : {1, 2}) {
        FockTruncation t{modes, modes == 1 ? 12 : 9};
        for (int trial = 0; trial < 4; ++trial) {
            auto f = random_symbol(modes, 4, rng);
            const double hbar = 0.3;
            auto round = dequantize(toeplitz_of_symbol(f, hbar, t), hbar);
            auto heat = berezin_transform_poly(f, std::complex<double>(hbar, 0.0));
            CHECK(max_coeff_distance(round, heat) <= 1e-10);
        }
    }
}

TEST_CASE("projector dequantization closed form") {
    auto vacuum = dequantize_projector({0}, 0.5);
    Eigen::VectorXcd origin = Eigen::VectorXcd::Zero(1);
    CHECK(vacuum(origin) == 1.0);

    Eigen::VectorXcd pt(1);
    pt << std::complex<double>(0.6, -0.8);  // |z|^2 = 1
    CHECK(vacuum(pt) == doctest::Approx(std::exp(-2.0)));

    auto excited = dequantize_projector({1}, 1.0);
    CHECK(excited(origin) == 0.0);
    CHECK(excited(pt) == doctest::Approx(std::exp(-1.0)));

    // matches the covariant symbol of the projector on the truncation
    FockTruncation t{1, 24};
    auto proj = occupation_projector(t, {1});
    CHECK(std::abs(berezin_symbol_at(proj, 1.0, pt) - excited(pt)) < 1e-12);
}

TEST_CASE("weyl generators satisfy the algebra relations on the interior") {
    FockTruncation t{1, 40};
    const double hbar = 0.5;
    Eigen::VectorXcd phi(1), psi(1);
    phi << std::complex<double>(0.9, 0.3);
    psi << std::complex<double>(-0.4, 0.7);

    auto w_zero = weyl_generator(Eigen::VectorXcd::Zero(1), hbar, t);
    CHECK(w_zero.matrix.isIdentity(1e-12));

    auto w = weyl_generator(phi, hbar, t);
    Eigen::JacobiSVD<MatrixXcd> svd(w.matrix);
    CHECK(std::abs(svd.singularValues().maxCoeff() - 1.0) <= 1e-6);
    CHECK(std::abs(svd.singularValues().minCoeff() - 1.0) <= 1e-6);

    auto w_minus = weyl_generator(Eigen::VectorXcd(-phi), hbar, t);
    CHECK(interior_column_diff(w.matrix.adjoint(), w_minus.matrix, t, t.cutoff / 2) <= 1e-10);

    // product relation with the component bracket {phi,psi} = -2 Im <phi,psi>
    auto w2 = weyl_generator(psi, hbar, t);
    auto w12 = weyl_generator(Eigen::VectorXcd(phi + psi), hbar, t);
    const double bracket = -2.0 * (phi[0] * std::conj(psi[0])).imag();
    const std::complex<double> phase =
        std::exp(std::complex<double>(0.0, -0.5 * hbar * bracket));
    CHECK(interior_column_diff(w.matrix * w2.matrix, phase * w12.matrix, t, t.cutoff / 2) <=
          1e-6);

    // generator commutator reproduces i hbar {phi, psi} on the interior
    auto ladders = build_ladders(t);
    auto quad_op = [&](const Eigen::VectorXcd& comps) {
        MatrixXcd m = comps[0] * ladders.raise[0].matrix +
                      std::conj(comps[0]) * ladders.lower[0].matrix;
        return MatrixXcd(std::sqrt(hbar) * m);
    };
    MatrixXcd comm = quad_op(phi) * quad_op(psi) - quad_op(psi) * quad_op(phi);
    MatrixXcd expected = std::complex<double>(0.0, hbar * bracket) *
                         MatrixXcd::Identity(t.dim(), t.dim());
    CHECK(interior_column_diff(comm, expected, t, 2) <= 1e-10);

    CHECK_THROWS_AS(weyl_generator(phi, hbar, FockTruncation{1, 4}), TruncationTooSmall);
}

TEST_CASE("scaled weyl generator is the plane-wave quantization") {
    FockTruncation t{1, 40};
    const double hbar = 0.5;
    Eigen::VectorXcd phi(1);
    phi << std::complex<double>(1.1, -0.5);
    const double damp = std::exp(-0.5 * hbar * phi.squaredNorm());

    auto zero = toeplitz_exponential(Eigen::VectorXcd::Zero(1), hbar, t);
    CHECK(zero.matrix.isIdentity(1e-12));

    auto te = toeplitz_exponential(phi, hbar, t);
    Eigen::JacobiSVD<MatrixXcd> svd(te.matrix);
    CHECK(svd.singularValues().maxCoeff() == doctest::Approx(damp).epsilon(1e-10));

    // covariant symbol at the origin equals the damping factor
    auto w = weyl_generator(phi, hbar, t);
    CHECK(std::abs(w.matrix(0, 0) - damp) <= 1e-10);
    CHECK(std::abs(berezin_symbol_at(w, hbar, Eigen::VectorXcd::Zero(1)) - damp) <= 1e-10);
}

TEST_CASE("trace pairing for gaussian symbols") {
    FockTruncation t{1, 30};
    const double hbar = 0.25;
    GaussianSymbol f;
    f.variances = Eigen::VectorXd::Constant(1, 1.0);
    f.amplitude = 1.0 / (2.0 * M_PI);

    SUBCASE("identity pairs with the full gaussian integral") {
        FockOperator identity{t, MatrixXcd::Identity(t.dim(), t.dim()), 0};
        auto pairing = trace_pairing_check(identity, f, hbar);
        CHECK(std::abs(pairing.rhs - 1.0 / (2.0 * M_PI * hbar)) < 1e-12);
        const double tail = std::pow(1.0 / 1.25, t.cutoff + 1) / (2.0 * M_PI * hbar);
        CHECK(pairing.diff <= tail * 1.001 + 1e-12);
    }

    SUBCASE("vacuum projector in closed form") {
        auto pairing = trace_pairing_projector({0}, f, hbar, t);
        CHECK(pairing.lhs.real() == doctest::Approx(1.0 / (2.0 * M_PI * 1.25)));
        CHECK(pairing.diff <= 1e-15);
    }

    SUBCASE("ladder polynomial against the gaussian") {
        FockTruncation deep{1, 60};
        auto zzb = PolynomialSymbol::coordinate(1, 0) * PolynomialSymbol::conj_coordinate(1, 0);
        auto op = toeplitz_of_symbol(zzb, hbar, deep);
        auto pairing = trace_pairing_check(op, f, hbar);
        // truncation deficit scales like (n+1) (beta/(beta+hbar))^n at the cutoff
        CHECK(pairing.diff <= 1e-4 * std::abs(pairing.rhs));
    }

    SUBCASE("zero symbol gives zero on both sides") {
        GaussianSymbol zero = f;
        zero.amplitude = 0.0;
        FockOperator identity{t, MatrixXcd::Identity(t.dim(), t.dim()), 0};
        auto pairing = trace_pairing_check(identity, zero, hbar);
        CHECK(pairing.lhs == std::complex<double>(0.0, 0.0));
        CHECK(pairing.rhs == std::complex<double>(0.0, 0.0));
    }

    SUBCASE("no closed form for non-polynomial operators") {
        std::mt19937_64 rng(151);
        FockTruncation small{1, 8};
        MatrixXcd junk = testing::random_complex_matrix(static_cast<int>(small.dim()),
                                                        static_cast<int>(small.dim()), rng);
        CHECK_THROWS_AS(trace_pairing_check(FockOperator{small, junk, 2}, f, hbar),
                        NoClosedForm);
    }
}
