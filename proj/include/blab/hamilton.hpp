#pragma once

#include "blab/beltrami.hpp"

#include <string>
#include <vector>

namespace blab::ham {

using field::BeltramiField;
using field::Complex;
using field::DiskSpec;
using field::EvalPolicy;
using field::QuadraticDifferential;

struct BasisFamily {
    std::vector<QuadraticDifferential> members;
    std::string id;

    static BasisFamily monomials(int maxDegree);
    /// (1-z)^{-(1+x)} per sweep value x: boundary-aligned powers whose L1
    /// norms and pairings against the boundary-singular Teichmuller form
    /// stay closed-form as x -> 1.
    static BasisFamily boundaryPowers(const std::vector<double>& xs);
    static BasisFamily kernels(const std::vector<double>& xs, double a, double b, double c);
};

/// Re <mu, phi> / ||phi||_1. Throws std::domain_error on a zero-norm phi.
/// Auto policy resolves both sides analytically when closed forms exist;
/// otherwise both go through the rule.
double hamiltonFunctional(const BeltramiField& mu, const QuadraticDifferential& phi,
                          const quad::DiskRule& rule, EvalPolicy policy = EvalPolicy::Auto);

struct MaximizeOptions {
    int iterations = 300;  // per start
    int starts = 8;
    unsigned long long seed = 1;
};

struct SearchResult {
    double value;
    std::vector<Complex> coefficients;  // for the family's members, D-normalized
    int iterations;
    int starts;
    int bestStart;
    bool budgetExhausted;
    std::string familyId;
};

/// Deterministic multi-start projected subgradient ascent of the discrete
/// functional sum(w mu phi_c)/sum(w |phi_c|) over coefficients c. Both sums
/// use the same nodes, so the reported value can never exceed the sampled
/// sup of |mu|. Unit starts at every member guarantee the result matches or
/// beats each member's own discrete functional.
SearchResult maximize(const BeltramiField& mu, const BasisFamily& family,
                      const quad::DiskRule& rule, const MaximizeOptions& opts = {});

/// Mass fraction \iint_{|z|<=rho} |phi| / ||phi|| per member.
std::vector<double> degenerationProfile(const std::vector<QuadraticDifferential>& seq,
                                        double rho, const quad::DiskRule& rule);

struct ReichEntry {
    std::string phiId;
    double norm;      // L1 norm of the raw member
    double deltaHat;  // delta of the unit-normalized member
};

struct ReichReport {
    std::vector<ReichEntry> entries;
    bool deltaTrendDecreasing;
    double liminfProxy;  // min over samples of min_n |phi_n(z)| (unit-normalized members)
    double proxyThreshold;
    std::string verdict;  // consistent-with-reich-sequence / fails-(a) / fails-(b) / fails-(a,b)
};

/// Necessary-condition probe for Reich's two conditions on a finite
/// sequence; (b) is sampled, never proven.
ReichReport reichSequenceCheck(const BeltramiField& mu,
                               const std::vector<QuadraticDifferential>& seq,
                               const quad::DiskRule& rule, int sampleBudget = 10000,
                               double proxyThreshold = 1e-10, unsigned long long seed = 1);

struct GapReport {
    DiskSpec region;
    double essSupEstimate;
    double maximized;
    double gap;  // essSupEstimate - maximized; large positive = restricted class beats mu locally
    SearchResult search;
};

/// Compares esssup|mu| on a subdisk G with the maximized restricted
/// functional over the family on G.
GapReport localExtremalityProbe(const BeltramiField& mu, const DiskSpec& G,
                                const BasisFamily& family, const quad::DiskRule& rule,
                                int sampleBudget = 10000, const MaximizeOptions& opts = {},
                                unsigned long long seed = 1);

}  // namespace blab::ham
