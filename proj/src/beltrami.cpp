#include "blab/beltrami.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace blab::field {

namespace {
constexpr double kPi = std::numbers::pi;
}

Complex sgn(Complex z) {
    const double m = std::abs(z);
    if (m == 0.0) return {0.0, 0.0};
    return z / m;
}

SupportMask::SupportMask(std::function<bool(Complex)> pred, std::string id,
                         Complex boundCenter, double boundRadius,
                         std::vector<double> radialBreaks)
    : pred_(std::move(pred)),
      id_(std::move(id)),
      boundCenter_(boundCenter),
      boundRadius_(boundRadius),
      radialBreaks_(std::move(radialBreaks)) {}

SupportMask SupportMask::radialCantor(const cantor::RadialCantorSet& s) {
    auto copy = s;  // value capture keeps the mask self-contained
    std::ostringstream id;
    id << "radial-cantor(stage=" << s.base().stageIndex() << ","
       << cantor::schemeName(s.base().scheme()) << ",lambda=" << s.lambdaD() << ")";
    return SupportMask([copy](Complex z) { return copy.contains(z); }, id.str(),
                       {0, 0}, s.lambdaD(), s.scaledEndpoints());
}

SupportMask SupportMask::disk(Complex center, double radius) {
    std::ostringstream id;
    id << "disk(" << center.real() << (center.imag() < 0 ? "-" : "+")
       << std::abs(center.imag()) << "i;r=" << radius << ")";
    return SupportMask([center, radius](Complex z) { return std::abs(z - center) < radius; },
                       id.str(), center, radius);
}

SupportMask SupportMask::wholeDisk() {
    return SupportMask([](Complex z) { return std::abs(z) < 1.0; }, "unit-disk");
}

SupportMask SupportMask::annulus(double rLo, double rHi) {
    std::ostringstream id;
    id << "annulus(" << rLo << "," << rHi << ")";
    return SupportMask(
        [rLo, rHi](Complex z) {
            const double r = std::abs(z);
            return r > rLo && r < rHi;
        },
        id.str(), {0, 0}, rHi, {rLo, rHi});
}

SupportMask SupportMask::complement() const {
    auto p = pred_;
    return SupportMask([p](Complex z) { return !p(z); }, "not(" + id_ + ")",
                       {0, 0}, 1.0);
}

BeltramiField BeltramiField::make(Form f, double bound, std::string id) {
    return BeltramiField(std::make_shared<const Node>(Node{std::move(f), bound, std::move(id)}));
}

BeltramiField BeltramiField::constant(Complex c) {
    std::ostringstream id;
    id << "const(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    return make(Constant{c}, std::abs(c), id.str());
}

BeltramiField BeltramiField::sampler(std::function<Complex(Complex)> f, double bound,
                                     std::string id) {
    return make(Sampler{std::move(f)}, bound, std::move(id));
}

Complex BeltramiField::value(Complex z) const {
    return std::visit(
        [&](const auto& f) -> Complex {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f.value;
            } else if constexpr (std::is_same_v<T, TeichmullerForm>) {
                const Complex p = f.phi.value(z);
                const double m = std::abs(p);
                if (m == 0.0 || !std::isfinite(m)) return {0.0, 0.0};
                return f.k * std::conj(p) / m;
            } else if constexpr (std::is_same_v<T, Deformed>) {
                const Complex base = f.eta->value(z);
                return f.E.contains(z) ? f.kappa(z) * base : base;
            } else if constexpr (std::is_same_v<T, Perturbation>) {
                if (!f.set.contains(z)) return {0.0, 0.0};
                Complex v = 1.0;
                for (int i = 0; i < f.m; ++i) v *= z;
                return v;
            } else if constexpr (std::is_same_v<T, Sum>) {
                Complex acc = 0;
                for (const auto& [c, g] : f.terms) acc += c * g->value(z);
                return acc;
            } else {
                return f.f(z);
            }
        },
        node_->form);
}

BeltramiField BeltramiField::scaledBy(Complex c) const {
    std::ostringstream id;
    id << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)*" << node_->id;
    return make(Sum{{{c, std::make_shared<const BeltramiField>(*this)}}},
                std::abs(c) * essSup(), id.str());
}

BeltramiField BeltramiField::plus(Complex coeff, const BeltramiField& other) const {
    std::ostringstream id;
    id << node_->id << " + (" << coeff.real() << (coeff.imag() < 0 ? "-" : "+")
       << std::abs(coeff.imag()) << "i)*" << other.id();
    return make(Sum{{{Complex(1.0), std::make_shared<const BeltramiField>(*this)},
                     {coeff, std::make_shared<const BeltramiField>(other)}}},
                essSup() + std::abs(coeff) * other.essSup(), id.str());
}

BeltramiField teichmullerForm(double k, const QuadraticDifferential& phi) {
    if (!(k > 0.0 && k < 1.0))
        throw std::domain_error("Teichmuller form requires k in (0,1)");
    if (phi.isZero())
        throw std::invalid_argument("Teichmuller form requires phi not identically zero");
    return BeltramiField::make(BeltramiField::TeichmullerForm{k, phi}, k,
                               "teich(k=" + std::to_string(k) + ";" + phi.id() + ")");
}

BeltramiField deform(const BeltramiField& eta, std::function<double(Complex)> kappa,
                     double supKappaOnE, const SupportMask& E, bool allowAboveOne) {
    if (supKappaOnE < 0.0)
        throw std::invalid_argument("deformation factor kappa must be non-negative");
    if (!allowAboveOne && supKappaOnE > 1.0)
        throw std::invalid_argument("deformation factor kappa exceeds 1 on E");
    const double bound = eta.essSup() * std::max(1.0, supKappaOnE);
    return BeltramiField::make(
        BeltramiField::Deformed{std::make_shared<const BeltramiField>(eta), std::move(kappa),
                                supKappaOnE, E},
        bound,
        "deform(" + eta.id() + ";supKappa=" + std::to_string(supKappaOnE) + ";on " + E.id() + ")");
}

BeltramiField deform(const BeltramiField& eta, double kappaOnE, const SupportMask& E) {
    return deform(eta, [kappaOnE](Complex) { return kappaOnE; }, kappaOnE, E);
}

BeltramiField perturbation(int m, const cantor::RadialCantorSet& s) {
    if (m < 1) throw std::invalid_argument("perturbation exponent m must be >= 1");
    const double bound = std::pow(s.lambdaD(), m);
    return BeltramiField::make(
        BeltramiField::Perturbation{m, s}, bound,
        "gamma(m=" + std::to_string(m) + ";lambda=" + std::to_string(s.lambdaD()) + ")");
}

namespace {

// <k conj(phi0)/|phi0|, .> for phi0 = 1/(1-z)^2, i.e. eta0 = k(1-z)/(1-zbar).
// All three battery shapes have closed forms here; these are what keep the
// boundary-concentrated sweep computable at all.
std::optional<Complex> etaBoundaryPairing(double k, const QuadraticDifferential& phi) {
    using QD = QuadraticDifferential;
    if (const auto* p = std::get_if<QD::Polynomial>(&phi.form())) {
        Complex acc = 0;
        for (size_t n = 0; n < p->coeffs.size(); ++n)
            acc += p->coeffs[n] * (kPi / double((n + 1) * (n + 2)));
        return k * acc;
    }
    if (const auto* kf = std::get_if<QD::Kernel>(&phi.form())) {
        const double amp = std::pow(1.0 - kf->x * kf->x, kf->a);
        if (kf->b == 0.0 || kf->x == 0.0) {
            if (kf->c >= 2.0) return std::nullopt;
            return k * amp * kPi / (2.0 - kf->c);
        }
        if (kf->c == 0.0) {
            // pi sum_j (b)_j x^j / (j! (j+1)(j+2))
            double sum = 0.0, t = 1.0;
            for (int j = 0; j < 100000; ++j) {
                const double contrib = t / double((j + 1) * (j + 2));
                sum += contrib;
                if (std::abs(contrib) < 1e-17 * std::abs(sum) && j > 8) break;
                t *= (kf->b + j) * kf->x / (j + 1);
            }
            return k * amp * kPi * sum;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

std::optional<PairingResult> analyticPairing(const BeltramiField& mu,
                                             const QuadraticDifferential& phi,
                                             const quad::DiskRule& rule) {
    using BF = BeltramiField;
    if (const auto* t = std::get_if<BF::TeichmullerForm>(&mu.form())) {
        if (std::holds_alternative<QuadraticDifferential::BoundarySingular>(t->phi.form())) {
            if (auto v = etaBoundaryPairing(t->k, phi)) return PairingResult{*v, 0.0, true};
        }
        return std::nullopt;
    }
    if (const auto* d = std::get_if<BF::Deformed>(&mu.form())) {
        auto base = analyticPairing(*d->eta, phi, rule);
        if (!base) return std::nullopt;
        // correction (kappa - 1) eta phi lives on E, inside |z| <= boundRadius
        // where phi is smooth; the rule resolves it.
        const auto& eta = *d->eta;
        const auto& E = d->E;
        const auto& kap = d->kappa;
        auto corr = quad::integrateDisk(
            [&](Complex z) -> Complex {
                if (!E.contains(z)) return {0.0, 0.0};
                return (kap(z) - 1.0) * eta.value(z) * phi.value(z);
            },
            rule);
        return PairingResult{base->value + corr.value, base->error + corr.errorEstimate, true};
    }
    if (const auto* s = std::get_if<BF::Sum>(&mu.form())) {
        Complex acc = 0;
        double err = 0;
        for (const auto& [c, g] : s->terms) {
            auto part = analyticPairing(*g, phi, rule);
            if (!part) return std::nullopt;
            acc += c * part->value;
            err += std::abs(c) * part->error;
        }
        return PairingResult{acc, err, true};
    }
    if (const auto* c = std::get_if<BF::Constant>(&mu.form())) {
        // constant against a polynomial: only z^0 survives the angle integral
        if (const auto* p = std::get_if<QuadraticDifferential::Polynomial>(&phi.form())) {
            Complex v = p->coeffs.empty() ? Complex(0) : c->value * p->coeffs[0] * kPi;
            return PairingResult{v, 0.0, true};
        }
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

PairingResult pairing(const BeltramiField& mu, const QuadraticDifferential& phi,
                      const quad::DiskRule& rule, EvalPolicy policy) {
    if (!phi.integrable())
        throw InfiniteNormError("pairing against non-integrable " + phi.id());
    if (policy != EvalPolicy::Quadrature) {
        if (auto r = analyticPairing(mu, phi, rule)) return *r;
        if (policy == EvalPolicy::Analytic)
            throw std::logic_error("no closed-form pairing for " + mu.id() + " vs " + phi.id());
    }
    auto res = quad::integrateDisk([&](Complex z) { return mu.value(z) * phi.value(z); }, rule);
    return {res.value, res.errorEstimate, false};
}

DeltaResult delta(const BeltramiField& mu, const QuadraticDifferential& phi,
                  const quad::DiskRule& rule, EvalPolicy policy) {
    const auto norm = l1Norm(phi, rule, policy);
    const auto pair = pairing(mu, phi, rule, policy);
    return {mu.essSup() * norm.value - pair.value.real(),
            mu.essSup() * norm.error + pair.error};
}

Complex perturbationMomentClosedForm(const BeltramiField& gamma, int n) {
    const auto* pert = std::get_if<BeltramiField::Perturbation>(&gamma.form());
    if (!pert) throw std::invalid_argument("closed-form moments need a perturbation field");
    if (n < 0) throw std::invalid_argument("moment order must be >= 0");

    const int p = pert->m + n;
    const double lam = pert->set.lambdaD();
    // angular factor of \iint_{a<|z|<b} z^p: 2 pi only for p = 0
    const double angular = (p == 0) ? 2.0 * kPi : 0.0;
    auto radial = [p](double a, double b) {
        return (std::pow(b, p + 2) - std::pow(a, p + 2)) / (p + 2);
    };

    Complex total = angular * radial(0.0, lam);  // full sub-disk |z| <= lambda
    const auto rings = cantor::RingSystem::complementOf(pert->set);
    for (const auto& ring : rings.rings()) {
        total -= angular * radial(toDouble(ring.lo), toDouble(ring.hi));
    }
    return total;
}

namespace {

// Deterministic stratified jittered samples of the mask's bounding disk.
template <typename Fn>
int stratifiedSamples(const SupportMask& mask, int budget, unsigned long long seed, Fn&& visit) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    const int side = std::max(2, (int)std::ceil(std::sqrt((double)budget)));
    const Complex c = mask.boundCenter();
    const double R = mask.boundRadius();
    int hits = 0;
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            const double u = (i + jitter(rng)) / side;
            const double v = (j + jitter(rng)) / side;
            const Complex z = c + Complex(R * (2 * u - 1), R * (2 * v - 1));
            if (std::abs(z - c) >= R) continue;   // stay in the bounding disk
            if (std::abs(z) >= 1.0) continue;     // and in the unit disk
            if (!mask.contains(z)) continue;
            ++hits;
            visit(z);
        }
    }
    return hits;
}

}  // namespace

EssSupEstimate essSupOn(const BeltramiField& mu, const SupportMask& mask, int budget,
                        unsigned long long seed) {
    if (budget < 1000) throw std::invalid_argument("essSupOn needs a budget of at least 1000");
    double best = 0.0;
    const int hits = stratifiedSamples(mask, budget, seed, [&](Complex z) {
        best = std::max(best, std::abs(mu.value(z)));
    });
    if (hits == 0) throw std::runtime_error("region not hit: " + mask.id());
    return {best, budget, hits, best / std::sqrt((double)hits)};
}

LandslideReport landslideProbe(const BeltramiField& mu, const std::vector<DiskSpec>& disks,
                               int budgetPerDisk, unsigned long long seed) {
    LandslideReport rep;
    rep.globalBound = mu.essSup();
    rep.landslideEvidence = false;
    unsigned long long s = seed;
    for (const auto& d : disks) {
        if (std::abs(d.center) + d.radius > 1.0)
            throw std::domain_error("probe disk leaves the unit disk");
        auto est = essSupOn(mu, SupportMask::disk(d.center, d.radius), budgetPerDisk, ++s);
        const double gap = rep.globalBound - est.value;
        const bool detected = gap > 3.0 * est.sigma;
        rep.entries.push_back({d, est, gap, detected});
        rep.landslideEvidence = rep.landslideEvidence || detected;
    }
    return rep;
}

}  // namespace blab::field
