#include "blab/qdiff.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace blab::field {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// 2F1(h, h; 2; s) for s in [0,1), h > 0, by its (positive-term) series.
double gauss2F1Diagonal(double h, double s) {
    const double rs = std::sqrt(s);
    double sum = 0.0;
    double t = 1.0;  // ((h)_j / j!) rs^j; contribute t^2/(j+1)
    for (int j = 0; j < 100000; ++j) {
        const double contrib = t * t / (j + 1);
        sum += contrib;
        if (contrib < 1e-17 * sum && j > 8) break;
        t *= (h + j) * rs / (j + 1);
    }
    return sum;
}

}  // namespace

QuadraticDifferential QuadraticDifferential::polynomial(std::vector<Complex> coeffs) {
    while (coeffs.size() > 1 && coeffs.back() == Complex(0)) coeffs.pop_back();
    std::ostringstream id;
    id << "poly[";
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (i) id << ',';
        id << coeffs[i].real();
        if (coeffs[i].imag() != 0) id << (coeffs[i].imag() > 0 ? "+" : "") << coeffs[i].imag() << 'i';
    }
    id << ']';
    return QuadraticDifferential(Polynomial{std::move(coeffs)}, id.str());
}

QuadraticDifferential QuadraticDifferential::monomial(int n, Complex coeff) {
    if (n < 0) throw std::invalid_argument("monomial degree must be >= 0");
    std::vector<Complex> c(n + 1, Complex(0));
    c[n] = coeff;
    std::string id = "z^" + std::to_string(n);
    return QuadraticDifferential(Polynomial{std::move(c)}, std::move(id));
}

QuadraticDifferential QuadraticDifferential::kernel(double x, double a, double b, double c) {
    if (x < 0.0 || x >= 1.0) throw std::invalid_argument("kernel parameter x must be in [0,1)");
    std::string id = "kernel(x=" + fmt(x) + ";a=" + fmt(a) + ",b=" + fmt(b) + ",c=" + fmt(c) + ")";
    return QuadraticDifferential(Kernel{x, a, b, c}, std::move(id));
}

QuadraticDifferential QuadraticDifferential::boundarySingular() {
    return QuadraticDifferential(BoundarySingular{}, "one-over-(1-z)^2");
}

QuadraticDifferential QuadraticDifferential::localMonomial(Complex center, double scale, int n) {
    if (n < 0) throw std::invalid_argument("monomial degree must be >= 0");
    if (scale <= 0.0) throw std::invalid_argument("local monomial scale must be positive");
    std::ostringstream id;
    id << "local-mono(" << center.real() << (center.imag() < 0 ? "-" : "+")
       << std::abs(center.imag()) << "i;s=" << scale << ";n=" << n << ")";
    return QuadraticDifferential(LocalMonomial{center, scale, n}, id.str());
}

Complex QuadraticDifferential::value(Complex z) const {
    return std::visit(
        [&](const auto& f) -> Complex {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Polynomial>) {
                Complex acc = 0;
                for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) acc = acc * z + *it;
                return acc;
            } else if constexpr (std::is_same_v<T, Kernel>) {
                Complex v = std::pow(1.0 - f.x * f.x, f.a);
                if (f.b != 0.0) v *= std::exp(-f.b * std::log(1.0 - f.x * z));
                if (f.c != 0.0) v *= std::exp(-f.c * std::log(1.0 - z));
                return v;
            } else if constexpr (std::is_same_v<T, LocalMonomial>) {
                const Complex u = (z - f.center) / f.scale;
                Complex v = 1.0;
                for (int i = 0; i < f.n; ++i) v *= u;
                return v;
            } else {
                const Complex w = 1.0 - z;
                return 1.0 / (w * w);
            }
        },
        form_);
}

bool QuadraticDifferential::integrable() const {
    return std::visit(
        [](const auto& f) -> bool {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Polynomial>) return true;
            else if constexpr (std::is_same_v<T, Kernel>) return f.c < 2.0;
            else if constexpr (std::is_same_v<T, LocalMonomial>) return true;
            else return false;
        },
        form_);
}

bool QuadraticDifferential::isZero() const {
    if (const auto* p = std::get_if<Polynomial>(&form_)) {
        for (const auto& c : p->coeffs)
            if (c != Complex(0)) return false;
        return true;
    }
    return false;
}

std::optional<double> QuadraticDifferential::analyticL1() const {
    if (const auto* p = std::get_if<Polynomial>(&form_)) {
        int nonzero = -1;
        for (size_t i = 0; i < p->coeffs.size(); ++i) {
            if (p->coeffs[i] != Complex(0)) {
                if (nonzero >= 0) return std::nullopt;  // genuine polynomial: no closed form
                nonzero = (int)i;
            }
        }
        if (nonzero < 0) return 0.0;
        return std::abs(p->coeffs[nonzero]) * 2.0 * std::numbers::pi / (nonzero + 2);
    }
    if (const auto* kf = std::get_if<Kernel>(&form_)) {
        const double amp = std::pow(1.0 - kf->x * kf->x, kf->a);
        if (kf->c >= 2.0) return std::nullopt;
        if (kf->b == 0.0 || kf->x == 0.0) {
            const double g = std::lgamma(2.0 - kf->c) - 2.0 * std::lgamma(2.0 - kf->c / 2.0);
            double v = std::numbers::pi * std::exp(g);
            // x == 0 with b != 0 leaves the (1-xz)^-b factor identically 1
            return amp * v;
        }
        if (kf->c == 0.0)
            return amp * std::numbers::pi * gauss2F1Diagonal(kf->b / 2.0, kf->x * kf->x);
        return std::nullopt;
    }
    return std::nullopt;
}

NormResult l1Norm(const QuadraticDifferential& phi, const quad::DiskRule& rule, EvalPolicy policy) {
    if (!phi.integrable())
        throw InfiniteNormError("L1 norm of " + phi.id() + " is infinite");
    if (policy != EvalPolicy::Quadrature) {
        if (auto v = phi.analyticL1()) return {*v, 0.0, true};
        if (policy == EvalPolicy::Analytic)
            throw std::logic_error("no closed-form L1 norm for " + phi.id());
    }
    auto res = quad::integrateDisk([&phi](Complex z) { return Complex(std::abs(phi.value(z)), 0.0); }, rule);
    return {res.value.real(), res.errorEstimate, false};
}

}  // namespace blab::field
