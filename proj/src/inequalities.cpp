#include "blab/inequalities.hpp"

#include <cmath>
#include <sstream>

namespace blab::ineq {

using field::sgn;

const char* verdictName(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::HoldsWithinError: return "holds-within-error";
        default: return "violated";
    }
}

Verdict classify(double slack, double budget) {
    if (slack >= 0.0) return Verdict::Holds;
    if (slack >= -budget) return Verdict::HoldsWithinError;
    return Verdict::Violated;
}

Constants constants(double k) {
    if (k < 0.0 || k >= 1.0)
        throw std::domain_error("lemma constants are defined for 0 <= k < 1");
    const double s = 2.0 * std::sqrt(2.0) * k * (1.0 + k * k);
    return {s / ((1.0 + k) * std::pow(1.0 - k, 3)),
            s / std::pow(1.0 - k * k, 2),
            8.0 * k * k};
}

double uniformConstant(double k) {
    if (k < 0.0) throw std::domain_error("k must be >= 0");
    return 8.0 * k * k;
}

GlobalPair::GlobalPair(BeltramiField mu, FieldFn alpha, FieldFn beta, FieldFn tau, double kBound,
                       bool certified, std::string id, std::string provenance)
    : mu_(std::move(mu)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      tau_(std::move(tau)),
      kBound_(kBound),
      certified_(certified),
      id_(std::move(id)),
      provenance_(std::move(provenance)) {}

GlobalPair GlobalPair::selfPair(const BeltramiField& mu) {
    return selfPair(mu, [](Complex) { return Complex(1.0, 0.0); }, "tau=1");
}

GlobalPair GlobalPair::selfPair(const BeltramiField& mu, FieldFn tau, const std::string& tauId) {
    auto alpha = [mu, tau](Complex z) { return -mu.value(z) * std::conj(tau(z)); };
    return GlobalPair(mu, alpha, alpha, std::move(tau), mu.essSup(), true,
                      "self(" + mu.id() + ";" + tauId + ")",
                      "self-equivalence: g = f, beta = alpha");
}

namespace {

// Beltrami coefficient of the inverse twist w -> w e^{-i s (1-|w|)^p}: its
// radial angle profile is -s(1-r)^p, so the derivative enters with +g.
Complex twistInverseBeta(Complex z, double s, int p) {
    const double r = std::abs(z);
    if (r == 0.0) return {0.0, 0.0};
    const double g = s * p * std::pow(1.0 - r, p - 1);
    return Complex(0, 1) * g * z * z / (r * (2.0 + Complex(0, 1) * g * r));
}

}  // namespace

GlobalPair GlobalPair::radialTwist(double s, int profilePower) {
    if (profilePower < 1) throw std::invalid_argument("twist profile power must be >= 1");
    auto beta = [s, profilePower](Complex z) { return twistInverseBeta(z, s, profilePower); };
    std::ostringstream id;
    id << "twist(s=" << s << ",p=" << profilePower << ")";
    return GlobalPair(BeltramiField::constant(0.0),
                      [](Complex) { return Complex(0.0); }, std::move(beta),
                      [](Complex) { return Complex(1.0); }, 0.0, true, id.str(),
                      "f = id, g = boundary-fixing radial twist");
}

GlobalPair GlobalPair::mobiusTwist(double s, Complex a, int profilePower) {
    if (std::abs(a) >= 1.0) throw std::invalid_argument("Mobius parameter must satisfy |a| < 1");
    auto beta = [s, a, profilePower](Complex z) {
        const Complex w = (z + a) / (1.0 + std::conj(a) * z);
        const Complex d = 1.0 + std::conj(a) * z;
        const Complex mp = (1.0 - std::norm(a)) / (d * d);
        return twistInverseBeta(w, s, profilePower) * std::conj(mp) / mp;
    };
    std::ostringstream id;
    id << "mobius-twist(s=" << s << ",a=" << a.real() << (a.imag() < 0 ? "-" : "+")
       << std::abs(a.imag()) << "i,p=" << profilePower << ")";
    return GlobalPair(BeltramiField::constant(0.0),
                      [](Complex) { return Complex(0.0); }, std::move(beta),
                      [](Complex) { return Complex(1.0); }, 0.0, true, id.str(),
                      "f = id, g = Mobius-conjugated radial twist");
}

GlobalPair GlobalPair::scaledBeta(const BeltramiField& mu, double scale) {
    if (scale < 0.0 || scale > 1.0)
        throw std::invalid_argument("beta scale must lie in [0,1]");
    auto tau = [](Complex) { return Complex(1.0, 0.0); };
    auto alpha = [mu](Complex z) { return -mu.value(z); };
    auto beta = [mu, scale](Complex z) { return -scale * mu.value(z); };
    std::ostringstream id;
    id << "scaled-beta(" << mu.id() << ";s=" << scale << ")";
    return GlobalPair(mu, std::move(alpha), std::move(beta), std::move(tau), mu.essSup(), false,
                      id.str(), "hypothesis-only pair: |beta| <= |alpha| arranged, no certificate");
}

GlobalPair GlobalPair::uncertifiedFields(const BeltramiField& mu, FieldFn alpha, FieldFn beta,
                                         FieldFn tau, double kBound, const std::string& id) {
    return GlobalPair(mu, std::move(alpha), std::move(beta), std::move(tau), kBound, false, id,
                      "raw fields, no equivalence certificate");
}

InfinitesimalPair::InfinitesimalPair(BeltramiField mu, BeltramiField nu, CertificateReport cert,
                                     std::string id)
    : mu_(std::move(mu)), nu_(std::move(nu)), cert_(cert), id_(std::move(id)) {}

std::optional<InfinitesimalPair> InfinitesimalPair::tryCertify(const BeltramiField& mu,
                                                               const BeltramiField& nu,
                                                               const quad::DiskRule& rule,
                                                               double diffScale, int nMax,
                                                               CertificateReport* report) {
    CertificateReport cert{0.0, 1e-6 * std::max(diffScale, 1e-9), nMax, false};
    for (int n = 0; n <= nMax; ++n) {
        auto zn = QuadraticDifferential::monomial(n);
        const Complex a = field::pairing(mu, zn, rule, field::EvalPolicy::Quadrature).value;
        const Complex b = field::pairing(nu, zn, rule, field::EvalPolicy::Quadrature).value;
        cert.maxMismatch = std::max(cert.maxMismatch, std::abs(a - b));
    }
    cert.pass = cert.maxMismatch <= cert.tolerance;
    if (report) *report = cert;
    if (!cert.pass) return std::nullopt;
    return InfinitesimalPair(mu, nu, cert, "inf(" + mu.id() + " ~ " + nu.id() + ")");
}

InfinitesimalPair InfinitesimalPair::certify(const BeltramiField& mu, const BeltramiField& nu,
                                             const quad::DiskRule& rule, double diffScale,
                                             int nMax) {
    CertificateReport cert;
    auto pair = tryCertify(mu, nu, rule, diffScale, nMax, &cert);
    if (!pair) {
        std::ostringstream os;
        os << "pairing-agreement certificate failed: max mismatch " << cert.maxMismatch
           << " exceeds tolerance " << cert.tolerance << " (n <= " << nMax << ")";
        throw CertificationError(os.str());
    }
    return *pair;
}

InfinitesimalPair InfinitesimalPair::perturbed(const BeltramiField& mu,
                                               const BeltramiField& gamma, Complex t,
                                               const quad::DiskRule& rule, int nMax) {
    return certify(mu, mu.plus(t, gamma), rule, std::abs(t), nMax);
}

namespace {

double reportBudget(std::initializer_list<double> errs) {
    double s = 0.0;
    for (double e : errs) s += e;
    return 3.0 * s;
}

InequalityReport finish(std::string check, std::string pairId, std::string phiId, double lhs,
                        double rhs, double budget) {
    // roundoff floor keeps exact-zero cases from flipping on summation dust
    budget += 1e-13 * (1.0 + std::abs(lhs) + std::abs(rhs));
    const double slack = rhs - lhs;
    return {std::move(check), std::move(pairId), std::move(phiId),
            lhs, rhs, slack, budget, classify(slack, budget)};
}

}  // namespace

InequalityReport mainInequalityCheck(const GlobalPair& pair, const QuadraticDifferential& phi,
                                     const quad::DiskRule& rule, MainForm form) {
    if (!phi.integrable()) throw field::InfiniteNormError("main inequality needs integrable phi");
    const auto& mu = pair.mu();

    if (form == MainForm::Product) {
        auto lhsI = quad::integrateDisk([&](Complex z) { return phi.value(z); }, rule);
        auto rhsI = quad::integrateDisk(
            [&](Complex z) -> Complex {
                const Complex p = phi.value(z);
                const double ap = std::abs(p);
                if (ap == 0.0) return {0.0, 0.0};
                const Complex phat = p / ap;
                const Complex m = mu.value(z);
                const Complex b = pair.beta(z);
                const double nb = std::norm(b);
                if (nb >= 1.0)
                    throw std::domain_error("main inequality: |beta| >= 1 at a node");
                const Complex one(1.0, 0.0);
                const Complex u = m * phat;
                const Complex corrective =
                    one - b * pair.tau(z) * (one - std::conj(u)) / (one - u);
                const double val = ap * std::norm(one - u) / (1.0 - std::norm(m)) *
                                   std::norm(corrective) / (1.0 - nb);
                return {val, 0.0};
            },
            rule);
        return finish("main-inequality", pair.id(), phi.id(), lhsI.value.real(),
                      rhsI.value.real(), reportBudget({lhsI.errorEstimate, rhsI.errorEstimate}));
    }

    auto lhsI = quad::integrateDisk(
        [&](Complex z) -> Complex {
            const Complex a = pair.alpha(z);
            const Complex b = pair.beta(z);
            const double na = std::norm(a), nb = std::norm(b);
            if (nb >= 1.0) throw std::domain_error("main inequality: |beta| >= 1 at a node");
            const Complex v = (b - a) * (1.0 - a * std::conj(b)) * pair.tau(z) * phi.value(z) /
                              ((1.0 - na) * (1.0 - nb));
            return v;
        },
        rule);
    auto rhsI = quad::integrateDisk(
        [&](Complex z) -> Complex {
            const Complex a = pair.alpha(z);
            const Complex b = pair.beta(z);
            const double na = std::norm(a), nb = std::norm(b);
            if (nb >= 1.0) throw std::domain_error("main inequality: |beta| >= 1 at a node");
            return {std::norm(a - b) * std::abs(phi.value(z)) / ((1.0 - na) * (1.0 - nb)), 0.0};
        },
        rule);
    return finish("main-inequality-difference", pair.id(), phi.id(), lhsI.value.real(),
                  rhsI.value.real(), reportBudget({lhsI.errorEstimate, rhsI.errorEstimate}));
}

InequalityReport infMainInequalityCheck(const InfinitesimalPair& pair,
                                        const QuadraticDifferential& phi,
                                        const quad::DiskRule& rule) {
    if (!phi.integrable())
        throw field::InfiniteNormError("infinitesimal main inequality needs integrable phi");
    const auto& mu = pair.mu();
    const auto& nu = pair.nu();

    auto lhsI = quad::integrateDisk(
        [&](Complex z) -> Complex {
            const Complex m = mu.value(z), n = nu.value(z);
            const double nn = std::norm(n);
            if (nn >= 1.0)
                throw std::domain_error("infinitesimal main inequality: |nu| >= 1 at a node");
            return (m - n) * (1.0 - m * std::conj(n)) * phi.value(z) / (1.0 - nn);
        },
        rule);
    auto rhsI = quad::integrateDisk(
        [&](Complex z) -> Complex {
            const Complex m = mu.value(z), n = nu.value(z);
            const double nn = std::norm(n);
            if (nn >= 1.0)
                throw std::domain_error("infinitesimal main inequality: |nu| >= 1 at a node");
            return {std::norm(m - n) * std::abs(n) * std::abs(phi.value(z)) / (1.0 - nn), 0.0};
        },
        rule);
    return finish("inf-main-inequality", pair.id(), phi.id(), lhsI.value.real(),
                  rhsI.value.real(), reportBudget({lhsI.errorEstimate, rhsI.errorEstimate}));
}

InequalityReport lemmaGlobalBound(const GlobalPair& pair, const QuadraticDifferential& phi,
                                  const quad::DiskRule& rule, double constantOverride) {
    if (!phi.integrable()) throw field::InfiniteNormError("lemma bound needs integrable phi");
    const auto& mu = pair.mu();
    const double C =
        constantOverride >= 0.0 ? constantOverride : std::pow(constants(pair.kBound()).cprime, 2);

    auto lhsI = quad::integrateDisk(
        [&](Complex z) -> Complex {
            const Complex m = mu.value(z);
            if (m == Complex(0.0)) return {0.0, 0.0};  // off the support set
            const Complex a = pair.alpha(z);
            const Complex b = pair.beta(z);
            if (std::abs(b) > std::abs(a) * (1.0 + 1e-12) + 1e-15) {
                std::ostringstream os;
                os << "decreasability hypothesis |beta| <= |alpha| fails at node (" << z.real()
                   << ", " << z.imag() << ")";
                throw PreconditionError(z, os.str());
            }
            return {std::norm(a - b) * std::abs(phi.value(z)), 0.0};
        },
        rule);
    auto rhsI = quad::integrateDisk(
        [&](Complex z) -> Complex {
            const Complex m = mu.value(z);
            if (m == Complex(0.0)) return {0.0, 0.0};
            const Complex p = phi.value(z);
            return {std::abs(p) - (p * sgn(m)).real(), 0.0};
        },
        rule);
    return finish("lemma-global", pair.id(), phi.id(), lhsI.value.real(),
                  C * rhsI.value.real(),
                  reportBudget({lhsI.errorEstimate, C * rhsI.errorEstimate}));
}

InequalityReport lemmaInfBound(const InfinitesimalPair& pair, const QuadraticDifferential& phi,
                               const quad::DiskRule& rule, LemmaVariant variant,
                               double constantOverride) {
    if (!phi.integrable()) throw field::InfiniteNormError("lemma bound needs integrable phi");
    const auto& mu = pair.mu();
    const auto& nu = pair.nu();
    const double k = mu.essSup();
    double C;
    if (constantOverride >= 0.0) {
        C = constantOverride;
    } else if (variant == LemmaVariant::Sharp) {
        C = std::pow(constants(k).ctilde, 2);
    } else {
        C = uniformConstant(k);
    }

    auto lhsI = quad::integrateDisk(
        [&](Complex z) -> Complex {
            const Complex m = mu.value(z);
            if (m == Complex(0.0)) return {0.0, 0.0};
            const Complex n = nu.value(z);
            if (std::abs(n) > std::abs(m) * (1.0 + 1e-12) + 1e-15) {
                std::ostringstream os;
                os << "modulus hypothesis |nu| <= |mu| fails at node (" << z.real() << ", "
                   << z.imag() << ")";
                throw PreconditionError(z, os.str());
            }
            return {std::norm(m - n) * std::abs(phi.value(z)), 0.0};
        },
        rule);
    auto rhsI = quad::integrateDisk(
        [&](Complex z) -> Complex {
            const Complex m = mu.value(z);
            if (m == Complex(0.0)) return {0.0, 0.0};
            const Complex p = phi.value(z);
            return {std::abs(p) - (p * sgn(m)).real(), 0.0};
        },
        rule);
    return finish(variant == LemmaVariant::Sharp ? "lemma-inf-sharp" : "lemma-inf-uniform",
                  pair.id(), phi.id(), lhsI.value.real(), C * rhsI.value.real(),
                  reportBudget({lhsI.errorEstimate, C * rhsI.errorEstimate}));
}

}  // namespace blab::ineq
