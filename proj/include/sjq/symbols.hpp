#ifndef SJQ_SYMBOLS_HPP
#define SJQ_SYMBOLS_HPP

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sjq/errors.hpp"

namespace sjq {

// ---------------------------------------------------------------------------
// Polynomial observables in canonical complex coordinates z^i, zb^i.
//
// The algebra is templated on the coefficient scalar: complex<double> for
// numerics and an exact complex-rational type for algebraic property tests,
// so coefficient identities can be separated from float rounding.
// ---------------------------------------------------------------------------

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<std::complex<double>> {
    using Scalar = std::complex<double>;
    static Scalar zero() { return {0.0, 0.0}; }
    static Scalar one() { return {1.0, 0.0}; }
    static Scalar imag_unit() { return {0.0, 1.0}; }
    static Scalar from_int(long n) { return {static_cast<double>(n), 0.0}; }
    static Scalar conjugate(const Scalar& s) { return std::conj(s); }
    static bool is_zero(const Scalar& s) { return s == Scalar{0.0, 0.0}; }
    static Scalar div_int(const Scalar& s, long n) { return s / static_cast<double>(n); }
};

struct MonomialKey {
    std::vector<int> z;   // holomorphic exponents, one per mode
    std::vector<int> zb;  // conjugate exponents

    friend bool operator<(const MonomialKey& a, const MonomialKey& b) {
        if (a.z != b.z) return a.z < b.z;
        return a.zb < b.zb;
    }
    friend bool operator==(const MonomialKey& a, const MonomialKey& b) {
        return a.z == b.z && a.zb == b.zb;
    }
    int degree() const {
        int d = 0;
        for (int e : z) d += e;
        for (int e : zb) d += e;
        return d;
    }
};

template <class Scalar>
class PolySymbolT {
  public:
    using Traits = ScalarTraits<Scalar>;
    using TermMap = std::map<MonomialKey, Scalar>;

    PolySymbolT() = default;
    explicit PolySymbolT(int modes) : modes_(modes) {}

    static PolySymbolT constant(int modes, Scalar c) {
        PolySymbolT f(modes);
        f.add_term(MonomialKey{std::vector<int>(modes, 0), std::vector<int>(modes, 0)}, c);
        return f;
    }
    static PolySymbolT coordinate(int modes, int i) {
        PolySymbolT f(modes);
        MonomialKey k{std::vector<int>(modes, 0), std::vector<int>(modes, 0)};
        k.z[i] = 1;
        f.add_term(k, Traits::one());
        return f;
    }
    static PolySymbolT conj_coordinate(int modes, int i) {
        PolySymbolT f(modes);
        MonomialKey k{std::vector<int>(modes, 0), std::vector<int>(modes, 0)};
        k.zb[i] = 1;
        f.add_term(k, Traits::one());
        return f;
    }

    int modes() const { return modes_; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    int total_degree() const {
        int d = 0;
        for (const auto& [key, c] : terms_) d = std::max(d, key.degree());
        return d;
    }

    int max_degree_z(int i) const {
        int d = 0;
        for (const auto& [key, c] : terms_) d = std::max(d, key.z[i]);
        return d;
    }
    int max_degree_zb(int i) const {
        int d = 0;
        for (const auto& [key, c] : terms_) d = std::max(d, key.zb[i]);
        return d;
    }

    void add_term(const MonomialKey& key, const Scalar& c) {
        if (Traits::is_zero(c)) return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, c);
        } else {
            it->second = it->second + c;
            if (Traits::is_zero(it->second)) terms_.erase(it);
        }
    }

    Scalar coefficient(const MonomialKey& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? Traits::zero() : it->second;
    }

    PolySymbolT conjugated() const {
        PolySymbolT out(modes_);
        for (const auto& [key, c] : terms_) {
            out.add_term(MonomialKey{key.zb, key.z}, Traits::conjugate(c));
        }
        return out;
    }

    PolySymbolT derivative_z(int i) const {
        PolySymbolT out(modes_);
        for (const auto& [key, c] : terms_) {
            if (key.z[i] == 0) continue;
            MonomialKey k = key;
            k.z[i] -= 1;
            out.add_term(k, c * Traits::from_int(key.z[i]));
        }
        return out;
    }
    PolySymbolT derivative_zb(int i) const {
        PolySymbolT out(modes_);
        for (const auto& [key, c] : terms_) {
            if (key.zb[i] == 0) continue;
            MonomialKey k = key;
            k.zb[i] -= 1;
            out.add_term(k, c * Traits::from_int(key.zb[i]));
        }
        return out;
    }

    friend PolySymbolT operator+(const PolySymbolT& a, const PolySymbolT& b) {
        check_modes(a, b);
        PolySymbolT out = a;
        for (const auto& [key, c] : b.terms_) out.add_term(key, c);
        return out;
    }
    friend PolySymbolT operator-(const PolySymbolT& a, const PolySymbolT& b) {
        check_modes(a, b);
        PolySymbolT out = a;
        for (const auto& [key, c] : b.terms_) out.add_term(key, Traits::zero() - c);
        return out;
    }
    friend PolySymbolT operator*(const PolySymbolT& a, const PolySymbolT& b) {
        check_modes(a, b);
        PolySymbolT out(a.modes_);
        for (const auto& [ka, ca] : a.terms_) {
            for (const auto& [kb, cb] : b.terms_) {
                MonomialKey k = ka;
                for (int i = 0; i < a.modes_; ++i) {
                    k.z[i] += kb.z[i];
                    k.zb[i] += kb.zb[i];
                }
                out.add_term(k, ca * cb);
            }
        }
        return out;
    }
    friend PolySymbolT operator*(const Scalar& c, const PolySymbolT& f) {
        PolySymbolT out(f.modes_);
        for (const auto& [key, t] : f.terms_) out.add_term(key, c * t);
        return out;
    }
    friend bool operator==(const PolySymbolT& a, const PolySymbolT& b) {
        return a.modes_ == b.modes_ && a.terms_ == b.terms_;
    }

  private:
    static void check_modes(const PolySymbolT& a, const PolySymbolT& b) {
        if (a.modes_ != b.modes_) {
            throw ModeMismatch("polynomial symbols live on different mode counts");
        }
    }

    int modes_ = 0;
    TermMap terms_;
};

using PolynomialSymbol = PolySymbolT<std::complex<double>>;

namespace detail {

// enumerate multi-indices alphaceil <= bound componentwise, calling fn(alpha)
template <class Fn>
void for_each_multi_index(const std::vector<int>& bound, Fn&& fn) {
    std::vector<int> alpha(bound.size(), 0);
    while (true) {
        fn(alpha);
        std::size_t i = 0;
        while (i < alpha.size() && alpha[i] == bound[i]) {
            alpha[i] = 0;
            ++i;
        }
        if (i == alpha.size()) break;
        ++alpha[i];
    }
}

template <class Scalar>
PolySymbolT<Scalar> multi_derivative_z(PolySymbolT<Scalar> f, const std::vector<int>& alpha) {
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        for (int k = 0; k < alpha[i]; ++k) f = f.derivative_z(static_cast<int>(i));
    }
    return f;
}

template <class Scalar>
PolySymbolT<Scalar> multi_derivative_zb(PolySymbolT<Scalar> f, const std::vector<int>& alpha) {
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        for (int k = 0; k < alpha[i]; ++k) f = f.derivative_zb(static_cast<int>(i));
    }
    return f;
}

}  // namespace detail

// {f, g} = i sum_i (dz_i f dzb_i g - dz_i g dzb_i f); the bracket that the
// hbar-linear part of both star commutators reproduces.
template <class Scalar>
PolySymbolT<Scalar> poisson_bracket(const PolySymbolT<Scalar>& f, const PolySymbolT<Scalar>& g) {
    if (f.modes() != g.modes()) throw ModeMismatch("poisson bracket needs equal mode counts");
    using Traits = ScalarTraits<Scalar>;
    PolySymbolT<Scalar> out(f.modes());
    for (int i = 0; i < f.modes(); ++i) {
        out = out + f.derivative_z(i) * g.derivative_zb(i) - g.derivative_z(i) * f.derivative_zb(i);
    }
    return Traits::imag_unit() * out;
}

// f *_T g = sum_alpha ((-hbar)^|alpha| / alpha!) (dz^alpha f) (dzb^alpha g):
// the product that anti-normal quantization composes under.
template <class Scalar>
PolySymbolT<Scalar> star_t(const PolySymbolT<Scalar>& f, const PolySymbolT<Scalar>& g,
                           const Scalar& hbar) {
    if (f.modes() != g.modes()) throw ModeMismatch("star product needs equal mode counts");
    using Traits = ScalarTraits<Scalar>;
    const int n = f.modes();
    std::vector<int> bound(n);
    for (int i = 0; i < n; ++i) bound[i] = std::min(f.max_degree_z(i), g.max_degree_zb(i));
    PolySymbolT<Scalar> out(n);
    detail::for_each_multi_index(bound, [&](const std::vector<int>& alpha) {
        auto df = detail::multi_derivative_z(f, alpha);
        if (df.empty()) return;
        auto dg = detail::multi_derivative_zb(g, alpha);
        if (dg.empty()) return;
        Scalar c = Traits::one();
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < alpha[i]; ++k) {
                c = c * (Traits::zero() - hbar);
                c = Traits::div_int(c, k + 1);
            }
        }
        out = out + c * (df * dg);
    });
    return out;
}

// f *_Xi g = sum_alpha (hbar^|alpha| / alpha!) (dzb^alpha f) (dz^alpha g):
// the product induced on dequantized symbols.
template <class Scalar>
PolySymbolT<Scalar> star_xi(const PolySymbolT<Scalar>& f, const PolySymbolT<Scalar>& g,
                            const Scalar& hbar) {
    if (f.modes() != g.modes()) throw ModeMismatch("star product needs equal mode counts");
    using Traits = ScalarTraits<Scalar>;
    const int n = f.modes();
    std::vector<int> bound(n);
    for (int i = 0; i < n; ++i) bound[i] = std::min(f.max_degree_zb(i), g.max_degree_z(i));
    PolySymbolT<Scalar> out(n);
    detail::for_each_multi_index(bound, [&](const std::vector<int>& alpha) {
        auto df = detail::multi_derivative_zb(f, alpha);
        if (df.empty()) return;
        auto dg = detail::multi_derivative_z(g, alpha);
        if (dg.empty()) return;
        Scalar c = Traits::one();
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < alpha[i]; ++k) {
                c = c * hbar;
                c = Traits::div_int(c, k + 1);
            }
        }
        out = out + c * (df * dg);
    });
    return out;
}

// Heat-type expansion sum_j (hbar^j / j!) (sum_i dz_i dzb_i)^j f; finite on
// polynomials and equal to the smoothing the quantize-dequantize round trip
// applies.
template <class Scalar>
PolySymbolT<Scalar> berezin_transform_poly(const PolySymbolT<Scalar>& f, const Scalar& hbar) {
    using Traits = ScalarTraits<Scalar>;
    PolySymbolT<Scalar> out = f;
    PolySymbolT<Scalar> current = f;
    Scalar factor = Traits::one();
    for (long j = 1;; ++j) {
        PolySymbolT<Scalar> lap(f.modes());
        for (int i = 0; i < f.modes(); ++i) {
            lap = lap + current.derivative_z(i).derivative_zb(i);
        }
        if (lap.empty()) break;
        current = lap;
        factor = Traits::div_int(factor * hbar, j);
        out = out + factor * current;
    }
    return out;
}

// ---------------------------------------------------------------------------
// complex<double> conveniences
// ---------------------------------------------------------------------------

std::complex<double> eval_symbol(const PolynomialSymbol& f, const Eigen::VectorXcd& z);

double max_coeff_distance(const PolynomialSymbol& a, const PolynomialSymbol& b);

// Residual of the transform-intertwining identity
//   B(f *_T g) = B(f) *_Xi B(g),   B = berezin_transform_poly.
// Exactly zero for polynomials up to rounding.
double gauge_relation_check(const PolynomialSymbol& f, const PolynomialSymbol& g, double hbar);

// Text form "1.0*z1^2*zb1 + (0,0.5)*z2"; mode indices are 1-based.
PolynomialSymbol parse_symbol(const std::string& text, int modes = -1);
std::string format_symbol(const PolynomialSymbol& f);

// ---------------------------------------------------------------------------
// Closed-form families
// ---------------------------------------------------------------------------

// f(z) = amplitude * prod_i exp(-|z_i|^2 / beta_i)
struct GaussianSymbol {
    Eigen::VectorXd variances;
    double amplitude = 1.0;

    int modes() const { return static_cast<int>(variances.size()); }
    double value(const Eigen::VectorXcd& z) const;

    static GaussianSymbol normalized(Eigen::VectorXd variances);  // amp = prod 1/(2 pi b_i)
};

// variances grow by hbar, amplitude picks up prod beta/(beta+hbar)
GaussianSymbol berezin_transform_gaussian(const GaussianSymbol& g, double hbar);

// Numerical convolution against the heat kernel for cross-validation of the
// closed form. Tensor-product trapezoid grid; the volume element per mode is
// 2 dx dy in canonical coordinates. tail_eps controls the domain radius.
double berezin_gaussian_quadrature(const GaussianSymbol& g, double hbar,
                                   const Eigen::VectorXcd& z, double tail_eps = 1e-18);

// f(z) = amplitude * exp(i phi(z)), phi(z) = 2 Re sum_i phi_i z_i
struct ExponentialSymbol {
    Eigen::VectorXcd phi;
    std::complex<double> amplitude{1.0, 0.0};

    int modes() const { return static_cast<int>(phi.size()); }
    double phi_norm_sq() const { return phi.squaredNorm(); }
    std::complex<double> value(const Eigen::VectorXcd& z) const;
};

// er_k(zeta) = exp(zeta) - sum_{j<=k} zeta^j/j!, evaluated without
// cancellation for small |zeta| via the tail series.
std::complex<double> exp_remainder(int k, std::complex<double> zeta);

struct RemainderBoundReport {
    double fitted_c = 0.0;
    long held_out_violations = 0;
    bool ok = false;
};

// Fits the smallest C with |er_k| <= C (1 + exp(Re zeta)) |zeta|^{k+1} on the
// training samples (seeded with the analytic zeta->0 limit 1/(2 (k+1)!)) and
// verifies the bound on the held-out samples.
RemainderBoundReport exp_remainder_bound_check(int k,
                                               const std::vector<std::complex<double>>& train,
                                               const std::vector<std::complex<double>>& held_out);

// Order-k product remainder for plane-wave symbols:
//   R = hbar^{-k} |er_k(zeta)| exp(-(hbar/2)|phi+phi'|^2),
//   zeta = hbar sum_i phi_i conj(phi'_i).
double star_remainder_exponentials(const ExponentialSymbol& a, const ExponentialSymbol& b,
                                   double hbar, int k);

}  // namespace sjq

#endif
