#pragma once

#include "blab/cantor.hpp"
#include "blab/qdiff.hpp"
#include "blab/quadrature.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace blab::field {

/// z/|z|, with sgn 0 = 0.
Complex sgn(Complex z);

/// Deterministic region predicate with an id and a bounding disk for
/// stratified sampling. Radial masks carry their jump radii so quadrature
/// rules can align panels to them.
class SupportMask {
public:
    SupportMask(std::function<bool(Complex)> pred, std::string id,
                Complex boundCenter = {0, 0}, double boundRadius = 1.0,
                std::vector<double> radialBreaks = {});

    static SupportMask radialCantor(const cantor::RadialCantorSet& s);
    static SupportMask disk(Complex center, double radius);
    static SupportMask wholeDisk();
    static SupportMask annulus(double rLo, double rHi);

    bool contains(Complex z) const { return pred_(z); }
    SupportMask complement() const;

    const std::string& id() const { return id_; }
    Complex boundCenter() const { return boundCenter_; }
    double boundRadius() const { return boundRadius_; }
    const std::vector<double>& radialBreaks() const { return radialBreaks_; }

private:
    std::function<bool(Complex)> pred_;
    std::string id_;
    Complex boundCenter_;
    double boundRadius_;
    std::vector<double> radialBreaks_;
};

/// Measurable complex dilatation field on the disk. Immutable; carries the
/// structural form it was built from so pairings can use closed forms when
/// the mass of the integrand escapes every fixed quadrature rule.
class BeltramiField {
public:
    struct Constant {
        Complex value;
    };
    struct TeichmullerForm {
        double k;
        QuadraticDifferential phi;
    };
    struct Deformed {
        std::shared_ptr<const BeltramiField> eta;
        std::function<double(Complex)> kappa;  // applied on E only
        double supKappaOnE;
        SupportMask E;
    };
    struct Perturbation {
        int m;
        cantor::RadialCantorSet set;
    };
    struct Sum {
        std::vector<std::pair<Complex, std::shared_ptr<const BeltramiField>>> terms;
    };
    struct Sampler {
        std::function<Complex(Complex)> f;
    };
    using Form = std::variant<Constant, TeichmullerForm, Deformed, Perturbation, Sum, Sampler>;

    static BeltramiField constant(Complex c);
    static BeltramiField sampler(std::function<Complex(Complex)> f, double bound, std::string id);

    Complex value(Complex z) const;
    double essSup() const { return node_->bound; }
    const std::string& id() const { return node_->id; }
    const Form& form() const { return node_->form; }

    BeltramiField scaledBy(Complex c) const;
    BeltramiField plus(Complex coeff, const BeltramiField& other) const;

private:
    struct Node {
        Form form;
        double bound;
        std::string id;
    };
    explicit BeltramiField(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static BeltramiField make(Form f, double bound, std::string id);
    std::shared_ptr<const Node> node_;

    friend BeltramiField teichmullerForm(double, const QuadraticDifferential&);
    friend BeltramiField deform(const BeltramiField&, std::function<double(Complex)>, double,
                                const SupportMask&, bool);
    friend BeltramiField perturbation(int, const cantor::RadialCantorSet&);
};

/// eta = k conj(phi)/|phi| (zero where phi vanishes). Requires k in (0,1).
BeltramiField teichmullerForm(double k, const QuadraticDifferential& phi);

/// mu = kappa * eta on E, eta off E. kappa must map into [0,1] with
/// sup_E kappa < 1 unless allowAboveOne (the constant-|eta| variant that
/// permits kappa up to 1/k has to be requested explicitly).
BeltramiField deform(const BeltramiField& eta, std::function<double(Complex)> kappa,
                     double supKappaOnE, const SupportMask& E, bool allowAboveOne = false);
BeltramiField deform(const BeltramiField& eta, double kappaOnE, const SupportMask& E);

/// gamma = z^m on the radial set, 0 elsewhere.
BeltramiField perturbation(int m, const cantor::RadialCantorSet& s);

struct PairingResult {
    Complex value;
    double error;
    bool analytic;
};

/// \iint mu phi dxdy. Auto policy evaluates through closed forms where the
/// field/differential combination has one (plus an always-quadrature
/// correction term for deformed fields) and falls back to the rule.
PairingResult pairing(const BeltramiField& mu, const QuadraticDifferential& phi,
                      const quad::DiskRule& rule, EvalPolicy policy = EvalPolicy::Auto);

struct DeltaResult {
    double value;
    double error;
};

/// delta[phi] = ||mu||_inf ||phi|| - Re <mu, phi>.
DeltaResult delta(const BeltramiField& mu, const QuadraticDifferential& phi,
                  const quad::DiskRule& rule, EvalPolicy policy = EvalPolicy::Auto);

/// Ring-decomposition value of \iint gamma z^n: the full sub-disk integral
/// minus one exact term per complementary ring, each vanishing by angular
/// integration. Exact modulo float arithmetic on the radial factors.
Complex perturbationMomentClosedForm(const BeltramiField& gamma, int n);

struct EssSupEstimate {
    double value;
    int samples;  // stratified candidates drawn
    int hits;     // candidates inside the mask
    double sigma; // sampling-error heuristic: value/sqrt(hits)
};

/// Max |mu| over stratified jittered samples of {mask = true}. Throws
/// std::runtime_error("region not hit") when no candidate lands in the mask.
EssSupEstimate essSupOn(const BeltramiField& mu, const SupportMask& mask, int budget,
                        unsigned long long seed = 1);

struct DiskSpec {
    Complex center;
    double radius;
};

struct LandslideEntry {
    DiskSpec disk;
    EssSupEstimate estimate;
    double gap;        // global essSup - local estimate
    bool gapDetected;  // gap > 3 sigma
};

struct LandslideReport {
    double globalBound;
    std::vector<LandslideEntry> entries;
    bool landslideEvidence;  // any gapDetected
};

LandslideReport landslideProbe(const BeltramiField& mu, const std::vector<DiskSpec>& disks,
                               int budgetPerDisk, unsigned long long seed = 1);

}  // namespace blab::field
