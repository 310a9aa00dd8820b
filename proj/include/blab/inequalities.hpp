#pragma once

#include "blab/beltrami.hpp"

#include <functional>
#include <optional>
#include <string>

namespace blab::ineq {

using field::BeltramiField;
using field::Complex;
using field::QuadraticDifferential;
using field::SupportMask;

enum class Verdict { Holds, HoldsWithinError, Violated };
const char* verdictName(Verdict v);
Verdict classify(double slack, double budget);

struct InequalityReport {
    std::string check;
    std::string pairId;
    std::string phiId;
    double lhs;
    double rhs;
    double slack;   // rhs - lhs
    double budget;  // 3 x accumulated quadrature error estimates
    Verdict verdict;
};

struct Constants {
    double cprime;   // 2 sqrt2 k (1+k^2) / ((1+k)(1-k)^3)
    double ctilde;   // 2 sqrt2 k (1+k^2) / (1-k^2)^2
    double uniform;  // 8 k^2
};

/// Throws std::domain_error unless 0 <= k < 1 (the uniform constant alone is
/// defined for every k >= 0; it is exposed separately for that case).
Constants constants(double k);
double uniformConstant(double k);

class PreconditionError : public std::runtime_error {
public:
    PreconditionError(Complex node, const std::string& what)
        : std::runtime_error(what), node_(node) {}
    Complex node() const { return node_; }

private:
    Complex node_;
};

class CertificationError : public std::runtime_error {
public:
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

using FieldFn = std::function<Complex(Complex)>;

/// A globally equivalent pair in pushforward coordinates: alpha and beta are
/// the inverse-map dilatations of the two maps composed with f, tau the
/// unit-modulus derivative phase of f (alpha = -mu/tau). Only constructor
/// provenance certifies equivalence; scaledBeta pairs carry a
/// hypothesis-only marker.
class GlobalPair {
public:
    static GlobalPair selfPair(const BeltramiField& mu);
    static GlobalPair selfPair(const BeltramiField& mu, FieldFn tau, const std::string& tauId);

    /// f = id against the boundary-fixing radial twist
    /// h(re^{it}) = r e^{i(t + s(1-r)^p)}.
    static GlobalPair radialTwist(double s, int profilePower = 1);

    /// The same twist conjugated by the disk automorphism
    /// M(z) = (z + a)/(1 + conj(a) z).
    static GlobalPair mobiusTwist(double s, Complex a, int profilePower = 1);

    /// beta = scale * alpha with alpha = -mu conj(tau). Satisfies the
    /// decreasability hypothesis |beta| <= |alpha| but carries no
    /// equivalence certificate.
    static GlobalPair scaledBeta(const BeltramiField& mu, double scale);

    /// Raw field pack, never certified; exists so precondition handling and
    /// report plumbing can be exercised against arbitrary alpha/beta.
    static GlobalPair uncertifiedFields(const BeltramiField& mu, FieldFn alpha, FieldFn beta,
                                        FieldFn tau, double kBound, const std::string& id);

    const BeltramiField& mu() const { return mu_; }
    Complex alpha(Complex z) const { return alpha_(z); }
    Complex beta(Complex z) const { return beta_(z); }
    Complex tau(Complex z) const { return tau_(z); }
    double kBound() const { return kBound_; }
    bool certified() const { return certified_; }
    const std::string& id() const { return id_; }
    const std::string& provenance() const { return provenance_; }

private:
    GlobalPair(BeltramiField mu, FieldFn alpha, FieldFn beta, FieldFn tau, double kBound,
               bool certified, std::string id, std::string provenance);

    BeltramiField mu_;
    FieldFn alpha_, beta_, tau_;
    double kBound_;
    bool certified_;
    std::string id_, provenance_;
};

struct CertificateReport {
    double maxMismatch;
    double tolerance;
    int nMax;
    bool pass;
};

/// Infinitesimally equivalent pair (mu, nu). Certification tests pairing
/// agreement against z^n, n <= nMax, at tolerance 1e-6 * diffScale.
class InfinitesimalPair {
public:
    static InfinitesimalPair certify(const BeltramiField& mu, const BeltramiField& nu,
                                     const quad::DiskRule& rule, double diffScale,
                                     int nMax = 15);
    static std::optional<InfinitesimalPair> tryCertify(const BeltramiField& mu,
                                                       const BeltramiField& nu,
                                                       const quad::DiskRule& rule,
                                                       double diffScale, int nMax,
                                                       CertificateReport* report);

    /// nu = mu + t gamma for gamma supported on a radial Cantor set; the
    /// certificate threshold scales with |t|.
    static InfinitesimalPair perturbed(const BeltramiField& mu, const BeltramiField& gamma,
                                       Complex t, const quad::DiskRule& rule, int nMax = 15);

    const BeltramiField& mu() const { return mu_; }
    const BeltramiField& nu() const { return nu_; }
    const CertificateReport& certificate() const { return cert_; }
    const std::string& id() const { return id_; }

private:
    InfinitesimalPair(BeltramiField mu, BeltramiField nu, CertificateReport cert, std::string id);
    BeltramiField mu_, nu_;
    CertificateReport cert_;
    std::string id_;
};

enum class MainForm { Product, Difference };
enum class LemmaVariant { Sharp, Uniform };

/// Product form: Re \iint phi  <=  \iint |phi| |1 - mu phi/|phi||^2/(1-|mu|^2)
///   * |1 - beta tau (1 - conj(mu phi/|phi|))/(1 - mu phi/|phi|)|^2/(1-|beta|^2).
/// Difference form: the equivalent alpha/beta statement. The product form
/// uses tau directly, so alpha = 0 nodes need no special casing.
InequalityReport mainInequalityCheck(const GlobalPair& pair, const QuadraticDifferential& phi,
                                     const quad::DiskRule& rule,
                                     MainForm form = MainForm::Product);

InequalityReport infMainInequalityCheck(const InfinitesimalPair& pair,
                                        const QuadraticDifferential& phi,
                                        const quad::DiskRule& rule);

/// \iint_L |alpha-beta|^2 |phi| <= C'(k)^2 \iint_L (|phi| - Re(phi sgn mu)),
/// L = supp mu. Requires |beta| <= |alpha| at nodes. constantOverride
/// replaces C'(k)^2 when >= 0 (used by scaling sanity tests).
InequalityReport lemmaGlobalBound(const GlobalPair& pair, const QuadraticDifferential& phi,
                                  const quad::DiskRule& rule, double constantOverride = -1.0);

/// Same with |mu-nu|^2 on the left; constant C~(k)^2 (Sharp) or 8k^2
/// (Uniform). Requires |nu| <= |mu| at nodes.
InequalityReport lemmaInfBound(const InfinitesimalPair& pair, const QuadraticDifferential& phi,
                               const quad::DiskRule& rule, LemmaVariant variant,
                               double constantOverride = -1.0);

}  // namespace blab::ineq
