#include "sjq/cfield.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "sjq/errors.hpp"

namespace sjq {

HbarGrid HbarGrid::geometric(double start, double stop, double factor) {
    if (!(start > 0) || !(stop > 0) || stop > start || !(factor > 0) || factor >= 1.0) {
        throw InvalidInput("geometric grid needs start >= stop > 0 and factor in (0,1)");
    }
    HbarGrid g;
    for (double h = start; h > stop * (1.0 - 1e-12); h *= factor) g.values.push_back(h);
    g.values.push_back(0.0);
    g.validate();
    return g;
}

namespace {
double parse_grid_token(const std::string& token) {
    const auto caret = token.find('^');
    if (caret != std::string::npos) {
        const double base = std::stod(token.substr(0, caret));
        const double exponent = std::stod(token.substr(caret + 1));
        return std::pow(base, exponent);
    }
    return std::stod(token);
}
}  // namespace

HbarGrid HbarGrid::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    try {
        if (colon == std::string::npos) {
            const double start = parse_grid_token(spec);
            return geometric(start, start * std::pow(2.0, -16));
        }
        const double start = parse_grid_token(spec.substr(0, colon));
        const double stop = parse_grid_token(spec.substr(colon + 1));
        return geometric(start, stop);
    } catch (const std::invalid_argument&) {
        throw MalformedInput("could not parse hbar grid spec '" + spec + "'");
    }
}

void HbarGrid::validate() const {
    if (values.size() < 2 || values.back() != 0.0) {
        throw InvalidInput("hbar grid must end with the classical point 0");
    }
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (!(values[i] > values[i + 1])) {
            throw InvalidInput("hbar grid must be strictly decreasing");
        }
    }
}

Section Section::identity(int modes) {
    Section s;
    s.kind = Kind::Identity;
    s.n_modes = modes;
    return s;
}

Section Section::toeplitz(PolynomialSymbol f) {
    Section s;
    s.kind = Kind::ToeplitzPolynomial;
    s.n_modes = f.modes();
    s.poly = std::move(f);
    return s;
}

Section Section::toeplitz(GaussianSymbol g) {
    Section s;
    s.kind = Kind::ToeplitzGaussian;
    s.n_modes = g.modes();
    s.gauss = std::move(g);
    return s;
}

Section Section::toeplitz_exponential(VectorXcd phi) {
    Section s;
    s.kind = Kind::ToeplitzExponential;
    s.n_modes = static_cast<int>(phi.size());
    s.phi = std::move(phi);
    return s;
}

Section Section::weyl(VectorXcd phi) {
    Section s;
    s.kind = Kind::Weyl;
    s.n_modes = static_cast<int>(phi.size());
    s.phi = std::move(phi);
    return s;
}

FockOperator Section::at(double hbar, const FockTruncation& t) const {
    if (!(hbar > 0)) throw InvalidInput("operator samples exist only for hbar > 0");
    switch (kind) {
        case Kind::Identity:
            return {t, MatrixXcd::Identity(t.dim(), t.dim()), 0};
        case Kind::ToeplitzPolynomial:
            return toeplitz_of_symbol(poly, hbar, t);
        case Kind::ToeplitzGaussian:
            return toeplitz_gaussian(gauss, hbar, t);
        case Kind::ToeplitzExponential:
            return sjq::toeplitz_exponential(phi, hbar, t);
        case Kind::Weyl:
            return weyl_generator(phi, hbar, t);
    }
    throw Error("unreachable section kind");
}

std::complex<double> Section::classical_value(const VectorXcd& z) const {
    switch (kind) {
        case Kind::Identity:
            return 1.0;
        case Kind::ToeplitzPolynomial:
            return eval_symbol(poly, z);
        case Kind::ToeplitzGaussian:
            return gauss.value(z);
        case Kind::ToeplitzExponential:
        case Kind::Weyl: {
            ExponentialSymbol e{phi, {1.0, 0.0}};
            return e.value(z);
        }
    }
    throw Error("unreachable section kind");
}

namespace {

double spectral_norm(const MatrixXcd& m) {
    Eigen::JacobiSVD<MatrixXcd> svd(m);
    return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

double interior_spectral_norm(const FockOperator& op) {
    const auto interior = op.trunc.interior_indices(op.valid_degree);
    MatrixXcd sub(interior.size(), interior.size());
    for (std::size_t r = 0; r < interior.size(); ++r) {
        for (std::size_t c = 0; c < interior.size(); ++c) {
            sub(r, c) = op.matrix(interior[r], interior[c]);
        }
    }
    return spectral_norm(sub);
}

// polar sampling of the polydisk |z_i| <= radius, all modes swept together
double classical_sup(const Section& s, double radius, int radial = 24, int angular = 16) {
    double sup = std::abs(s.classical_value(VectorXcd::Zero(s.modes())));
    for (int r = 1; r <= radial; ++r) {
        const double rho = radius * r / radial;
        for (int a = 0; a < angular; ++a) {
            const double theta = 2.0 * M_PI * a / angular;
            VectorXcd z(s.modes());
            for (int i = 0; i < s.modes(); ++i) {
                z[i] = std::polar(rho, theta + 2.0 * M_PI * i / (angular * s.modes()));
            }
            sup = std::max(sup, std::abs(s.classical_value(z)));
        }
    }
    return sup;
}

}  // namespace

NormFunctionResult norm_function(const SectionSample& s, double domain_radius) {
    s.grid.validate();
    NormFunctionResult out;
    for (double hbar : s.grid.values) {
        double norm;
        if (hbar == 0.0) {
            norm = classical_sup(s.rule, domain_radius);
        } else {
            FockOperator op = s.at(hbar);
            norm = (s.rule.kind == Section::Kind::ToeplitzPolynomial)
                       ? interior_spectral_norm(op)
                       : spectral_norm(op.matrix);
        }
        out.values.push_back({hbar, norm});
    }
    for (std::size_t i = 0; i + 1 < out.values.size(); ++i) {
        out.max_jump = std::max(out.max_jump,
                                std::abs(out.values[i].second - out.values[i + 1].second));
    }
    return out;
}

double toeplitz_norm_coherent_estimate(const PolynomialSymbol& f, double hbar,
                                       const FockTruncation& t, double radius,
                                       int radial_samples, int angular_samples) {
    FockOperator op = toeplitz_of_symbol(f, hbar, t);
    double sup = std::abs(berezin_symbol_at(op, hbar, VectorXcd::Zero(t.modes)));
    for (int r = 1; r <= radial_samples; ++r) {
        const double rho = radius * r / radial_samples;
        for (int a = 0; a < angular_samples; ++a) {
            VectorXcd z(t.modes);
            for (int i = 0; i < t.modes; ++i) {
                z[i] = std::polar(rho, 2.0 * M_PI * (a + static_cast<double>(i) / t.modes) /
                                           angular_samples);
            }
            sup = std::max(sup, std::abs(berezin_symbol_at(op, hbar, z)));
        }
    }
    return sup;
}

ExpansionResult dequantization_expansion(const SectionSample& s, int order) {
    if (order < 0) throw InvalidInput("expansion order must be nonnegative");
    s.grid.validate();
    ExpansionResult out;
    const std::complex<double> one{1.0, 0.0};

    switch (s.rule.kind) {
        case Section::Kind::Identity: {
            out.coefficients.push_back(PolynomialSymbol::constant(s.rule.modes(), one));
            for (int j = 1; j <= order; ++j) {
                out.coefficients.push_back(PolynomialSymbol(s.rule.modes()));
            }
            for (double hbar : s.grid.values) {
                if (hbar > 0) out.residuals.push_back({hbar, 0.0});
            }
            return out;
        }
        case Section::Kind::ToeplitzPolynomial: {
            // heat coefficients f_j = (1/j!) Delta^j f, exact and terminating
            PolynomialSymbol current = s.rule.poly;
            out.coefficients.push_back(current);
            double factorial = 1.0;
            for (int j = 1; j <= order; ++j) {
                PolynomialSymbol lap(s.rule.modes());
                for (int i = 0; i < s.rule.modes(); ++i) {
                    lap = lap + current.derivative_z(i).derivative_zb(i);
                }
                current = lap;
                factorial *= j;
                out.coefficients.push_back(std::complex<double>(1.0 / factorial, 0.0) * current);
            }
            for (double hbar : s.grid.values) {
                if (!(hbar > 0)) continue;
                PolynomialSymbol recovered = dequantize(s.at(hbar), hbar);
                PolynomialSymbol partial(s.rule.modes());
                double power = 1.0;
                for (int j = 0; j <= order; ++j) {
                    partial = partial + std::complex<double>(power, 0.0) * out.coefficients[j];
                    power *= hbar;
                }
                out.residuals.push_back(
                    {hbar, max_coeff_distance(recovered, partial) / std::pow(hbar, order)});
            }
            return out;
        }
        case Section::Kind::Weyl: {
            const double half_norm = 0.5 * s.rule.phi.squaredNorm();
            double factorial = 1.0;
            for (int j = 0; j <= order; ++j) {
                if (j > 0) factorial *= j;
                out.weyl_amplitudes.push_back(std::pow(-half_norm, j) / factorial);
            }
            for (double hbar : s.grid.values) {
                if (!(hbar > 0)) continue;
                // Xi(W) = exp(-hbar |phi|^2/2) e^{i phi}; the residual of the
                // truncated exponential series is exact in closed form
                const double resid =
                    std::abs(exp_remainder(order, {-hbar * half_norm, 0.0})) /
                    std::pow(hbar, order);
                out.residuals.push_back({hbar, resid});
            }
            return out;
        }
        default:
            throw NotExpandable("no dequantization expansion for this section family");
    }
}

LimitTable classical_limit_berezin(const GaussianSymbol& f, const HbarGrid& grid) {
    grid.validate();
    for (int i = 0; i < f.variances.size(); ++i) {
        if (!(f.variances[i] > 0)) throw InvalidInput("gaussian variances must be positive");
    }
    auto sup_distance = [&f](double hbar) {
        if (hbar == 0.0) return 0.0;
        const GaussianSymbol g = berezin_transform_gaussian(f, hbar);
        const double a1 = std::abs(f.amplitude);
        const double a2 = std::abs(g.amplitude);
        if (f.modes() == 1) {
            const double b1 = f.variances[0], b2 = g.variances[0];
            double best = std::abs(a1 - a2);  // origin
            const double slope = 1.0 / b1 - 1.0 / b2;
            const double ratio = (a1 * b2) / (a2 * b1);
            if (slope > 0 && ratio > 0) {
                const double u = std::log(ratio) / slope;  // stationary point of the gap
                if (u > 0) {
                    best = std::max(best, std::abs(a1 * std::exp(-u / b1) -
                                                   a2 * std::exp(-u / b2)));
                }
            }
            return best;
        }
        // several modes: radial scan along equal-|z| directions plus origin
        double best = std::abs(a1 - a2);
        for (int step = 1; step <= 200; ++step) {
            const double u = 0.05 * step;
            double v1 = a1, v2 = a2;
            for (int i = 0; i < f.modes(); ++i) {
                v1 *= std::exp(-u / f.variances[i]);
                v2 *= std::exp(-u / g.variances[i]);
            }
            best = std::max(best, std::abs(v1 - v2));
        }
        return best;
    };

    LimitTable out;
    for (double hbar : grid.values) out.distances.push_back({hbar, sup_distance(hbar)});
    out.strictly_decreasing = true;
    for (std::size_t i = 0; i + 1 < out.distances.size(); ++i) {
        if (!(out.distances[i].second > out.distances[i + 1].second) &&
        	!(out.distances[i + 1].first == 0.0 && out.distances[i].second == 0.0)) {
            out.strictly_decreasing = false;
        }
    }
    return out;
}

StateFieldResult state_field(const SectionSample& s) {
    s.grid.validate();
    StateFieldResult out;
    for (double hbar : s.grid.values) {
        std::complex<double> value;
        if (hbar == 0.0) {
            value = s.rule.classical_value(VectorXcd::Zero(s.rule.modes()));
        } else {
            value = s.at(hbar).matrix(0, 0);  // vacuum element = covariant symbol at 0
        }
        out.values.push_back({hbar, value});
    }
    for (std::size_t i = 0; i + 1 < out.values.size(); ++i) {
        out.max_jump =
            std::max(out.max_jump, std::abs(out.values[i].second - out.values[i + 1].second));
    }
    return out;
}

}  // namespace sjq
