#ifndef SJQ_RATIONAL_COMPLEX_HPP
#define SJQ_RATIONAL_COMPLEX_HPP

#include <boost/rational.hpp>

#include "sjq/symbols.hpp"

namespace sjq {

// Exact complex-rational coefficients. Instantiating the symbol algebra with
// these separates algebraic identities (associativity, bracket compatibility)
// from floating-point rounding.
struct RationalComplex {
    using Q = boost::rational<long long>;
    Q re{0};
    Q im{0};

    RationalComplex() = default;
    RationalComplex(Q r, Q i) : re(std::move(r)), im(std::move(i)) {}
    static RationalComplex real(long long num, long long den = 1) {
        return RationalComplex(Q(num, den), Q(0));
    }

    friend RationalComplex operator+(const RationalComplex& a, const RationalComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend RationalComplex operator-(const RationalComplex& a, const RationalComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
};

template <>
struct ScalarTraits<RationalComplex> {
    using Scalar = RationalComplex;
    using Q = RationalComplex::Q;
    static Scalar zero() { return {}; }
    static Scalar one() { return {Q(1), Q(0)}; }
    static Scalar imag_unit() { return {Q(0), Q(1)}; }
    static Scalar from_int(long n) { return {Q(n), Q(0)}; }
    static Scalar conjugate(const Scalar& s) { return {s.re, -s.im}; }
    static bool is_zero(const Scalar& s) { return s.re == Q(0) && s.im == Q(0); }
    static Scalar div_int(const Scalar& s, long n) { return {s.re / Q(n), s.im / Q(n)}; }
};

using ExactSymbol = PolySymbolT<RationalComplex>;

}  // namespace sjq

#endif
