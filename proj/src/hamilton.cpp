#include "blab/hamilton.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace blab::ham {

using field::sgn;

BasisFamily BasisFamily::monomials(int maxDegree) {
    BasisFamily fam;
    for (int n = 0; n <= maxDegree; ++n)
        fam.members.push_back(QuadraticDifferential::monomial(n));
    fam.id = "monomials(N=" + std::to_string(maxDegree) + ")";
    return fam;
}

BasisFamily BasisFamily::boundaryPowers(const std::vector<double>& xs) {
    BasisFamily fam;
    std::ostringstream id;
    id << "boundary-powers(x=";
    for (size_t i = 0; i < xs.size(); ++i) {
        fam.members.push_back(QuadraticDifferential::kernel(xs[i], 0.0, 0.0, 1.0 + xs[i]));
        id << (i ? "," : "") << xs[i];
    }
    id << ")";
    fam.id = id.str();
    return fam;
}

BasisFamily BasisFamily::kernels(const std::vector<double>& xs, double a, double b, double c) {
    BasisFamily fam;
    std::ostringstream id;
    id << "kernels(a=" << a << ",b=" << b << ",c=" << c << ";x=";
    for (size_t i = 0; i < xs.size(); ++i) {
        fam.members.push_back(QuadraticDifferential::kernel(xs[i], a, b, c));
        id << (i ? "," : "") << xs[i];
    }
    id << ")";
    fam.id = id.str();
    return fam;
}

double hamiltonFunctional(const BeltramiField& mu, const QuadraticDifferential& phi,
                          const quad::DiskRule& rule, EvalPolicy policy) {
    const auto norm = field::l1Norm(phi, rule, policy);
    if (norm.value <= 0.0) throw std::domain_error("Hamilton functional needs ||phi|| > 0");
    const auto pair = field::pairing(mu, phi, rule, policy);
    return pair.value.real() / norm.value;
}

namespace {

struct DiscreteProblem {
    // basis[j * n + i]: member j at node i
    std::vector<Complex> basis;
    std::vector<Complex> weightedMu;  // w_i * mu(z_i)
    std::vector<double> weights;
    size_t n = 0, J = 0;

    double evalAndSubgradient(const std::vector<Complex>& c, std::vector<Complex>* grad) const {
        // phi_i = sum_j c_j basis_ji
        std::vector<Complex> phi(n, Complex(0));
        for (size_t j = 0; j < J; ++j) {
            const Complex cj = c[j];
            if (cj == Complex(0)) continue;
            const Complex* row = &basis[j * n];
            for (size_t i = 0; i < n; ++i) phi[i] += cj * row[i];
        }
        double N = 0.0, D = 0.0;
        for (size_t i = 0; i < n; ++i) {
            N += (weightedMu[i] * phi[i]).real();
            D += weights[i] * std::abs(phi[i]);
        }
        if (D <= 0.0) {
            if (grad) std::fill(grad->begin(), grad->end(), Complex(0));
            return 0.0;
        }
        const double F = N / D;
        if (grad) {
            // Wirtinger-style subgradient of N/D at D = 1 scaling; stored as
            // complex whose re/im parts are the partials wrt Re c_j / Im c_j.
            for (size_t j = 0; j < J; ++j) {
                const Complex* row = &basis[j * n];
                Complex gN(0), gD(0);
                for (size_t i = 0; i < n; ++i) {
                    gN += weightedMu[i] * row[i];
                    const Complex s = sgn(phi[i]);
                    gD += weights[i] * std::conj(s) * row[i];
                }
                const double dNr = gN.real(), dNi = -gN.imag();
                const double dDr = gD.real(), dDi = -gD.imag();
                (*grad)[j] = Complex((dNr - F * dDr) / D, (dNi - F * dDi) / D);
            }
        }
        return F;
    }

    double denom(const std::vector<Complex>& c) const {
        double D = 0.0;
        std::vector<Complex> phi(n, Complex(0));
        for (size_t j = 0; j < J; ++j) {
            const Complex* row = &basis[j * n];
            for (size_t i = 0; i < n; ++i) phi[i] += c[j] * row[i];
        }
        for (size_t i = 0; i < n; ++i) D += weights[i] * std::abs(phi[i]);
        return D;
    }
};

}  // namespace

SearchResult maximize(const BeltramiField& mu, const BasisFamily& family,
                      const quad::DiskRule& rule, const MaximizeOptions& opts) {
    if (family.members.empty()) throw std::invalid_argument("empty basis family");
    if (opts.iterations < 100) throw std::invalid_argument("maximize needs >= 100 iterations");
    for (const auto& m : family.members)
        if (!m.integrable()) throw field::InfiniteNormError("family member " + m.id());

    const auto& nodes = rule.nodes();
    DiscreteProblem prob;
    prob.n = nodes.size();
    prob.J = family.members.size();
    prob.basis.resize(prob.n * prob.J);
    prob.weightedMu.resize(prob.n);
    prob.weights.resize(prob.n);
    for (size_t i = 0; i < prob.n; ++i) {
        prob.weights[i] = nodes[i].w;
        prob.weightedMu[i] = nodes[i].w * mu.value(nodes[i].z);
    }
    for (size_t j = 0; j < prob.J; ++j)
        for (size_t i = 0; i < prob.n; ++i)
            prob.basis[j * prob.n + i] = family.members[j].value(nodes[i].z);

    const int totalStarts = std::max<int>(opts.starts, (int)prob.J);
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double bestValue = -1e300;
    std::vector<Complex> bestC(prob.J, Complex(0));
    int bestStart = -1;
    bool exhausted = false;

    std::vector<Complex> c(prob.J), grad(prob.J);
    for (int s = 0; s < totalStarts; ++s) {
        if (s < (int)prob.J) {
            std::fill(c.begin(), c.end(), Complex(0));
            c[s] = 1.0;
        } else {
            for (auto& v : c) v = Complex(gauss(rng), gauss(rng));
        }
        double D = prob.denom(c);
        if (D <= 0) continue;
        for (auto& v : c) v /= D;

        double lastImprovedValue = -1e300;
        int lastImprovedIter = 0;
        for (int it = 1; it <= opts.iterations; ++it) {
            const double F = prob.evalAndSubgradient(c, &grad);
            if (F > bestValue + 1e-15) {
                bestValue = F;
                bestC = c;
                bestStart = s;
            }
            if (F > lastImprovedValue + 1e-12) {
                lastImprovedValue = F;
                lastImprovedIter = it;
            }
            double gn = 0.0;
            for (const auto& g : grad) gn += std::norm(g);
            gn = std::sqrt(gn);
            if (gn < 1e-14) break;
            const double step = 0.5 / std::sqrt((double)it);
            for (size_t j = 0; j < prob.J; ++j) c[j] += step / gn * grad[j];
            D = prob.denom(c);
            if (D <= 0) break;
            for (auto& v : c) v /= D;
        }
        if (opts.iterations - lastImprovedIter < opts.iterations / 10) exhausted = true;
    }

    SearchResult res;
    res.value = bestValue;
    res.coefficients = bestC;
    res.iterations = opts.iterations;
    res.starts = totalStarts;
    res.bestStart = bestStart;
    res.budgetExhausted = exhausted;
    res.familyId = family.id;
    return res;
}

std::vector<double> degenerationProfile(const std::vector<QuadraticDifferential>& seq,
                                        double rho, const quad::DiskRule& rule) {
    if (rho <= 0.0 || rho >= 1.0) throw std::domain_error("compact radius must be in (0,1)");
    const auto inner = rule.mapped({0.0, 0.0}, rho);
    std::vector<double> out;
    out.reserve(seq.size());
    for (const auto& phi : seq) {
        const double norm = field::l1Norm(phi, rule).value;
        if (norm <= 0.0) throw std::domain_error("degeneration profile needs ||phi|| > 0");
        const auto mass = quad::integrateDisk(
            [&phi](Complex z) { return Complex(std::abs(phi.value(z)), 0.0); }, inner);
        out.push_back(mass.value.real() / norm);
    }
    return out;
}

ReichReport reichSequenceCheck(const BeltramiField& mu,
                               const std::vector<QuadraticDifferential>& seq,
                               const quad::DiskRule& rule, int sampleBudget,
                               double proxyThreshold, unsigned long long seed) {
    ReichReport rep;
    rep.proxyThreshold = proxyThreshold;
    std::vector<double> norms;
    for (const auto& phi : seq) {
        const double norm = field::l1Norm(phi, rule).value;
        const auto d = field::delta(mu, phi, rule);
        rep.entries.push_back({phi.id(), norm, norm > 0 ? d.value / norm : 0.0});
        norms.push_back(norm);
    }
    rep.deltaTrendDecreasing = true;
    for (size_t i = 1; i < rep.entries.size(); ++i)
        if (rep.entries[i].deltaHat > rep.entries[i - 1].deltaHat + 1e-14)
            rep.deltaTrendDecreasing = false;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int side = std::max(2, (int)std::ceil(std::sqrt((double)sampleBudget)));
    double proxy = 1e300;
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            const double xx = 2.0 * (i + unif(rng)) / side - 1.0;
            const double yy = 2.0 * (j + unif(rng)) / side - 1.0;
            const Complex z{xx, yy};
            if (std::abs(z) >= 1.0) continue;
            double m = 1e300;
            for (size_t nIdx = 0; nIdx < seq.size(); ++nIdx) {
                if (norms[nIdx] <= 0) continue;
                m = std::min(m, std::abs(seq[nIdx].value(z)) / norms[nIdx]);
            }
            proxy = std::min(proxy, m);
        }
    }
    rep.liminfProxy = proxy;

    const bool failsB = proxy <= proxyThreshold;
    if (rep.deltaTrendDecreasing && !failsB) rep.verdict = "consistent-with-reich-sequence";
    else if (!rep.deltaTrendDecreasing && failsB) rep.verdict = "fails-(a,b)";
    else if (!rep.deltaTrendDecreasing) rep.verdict = "fails-(a)";
    else rep.verdict = "fails-(b)";
    return rep;
}

GapReport localExtremalityProbe(const BeltramiField& mu, const DiskSpec& G,
                                const BasisFamily& family, const quad::DiskRule& rule,
                                int sampleBudget, const MaximizeOptions& opts,
                                unsigned long long seed) {
    if (G.radius <= 0.0) throw std::domain_error("probe region is empty");
    if (std::abs(G.center) + G.radius >= 1.0)
        throw std::domain_error("probe region must have closure inside the open disk");

    const auto est = field::essSupOn(mu, field::SupportMask::disk(G.center, G.radius),
                                     sampleBudget, seed);
    const auto ruleG = rule.mapped(G.center, G.radius);
    const auto search = maximize(mu, family, ruleG, opts);

    GapReport rep;
    rep.region = G;
    rep.essSupEstimate = est.value;
    rep.maximized = search.value;
    rep.gap = est.value - search.value;
    rep.search = search;
    return rep;
}

}  // namespace blab::ham
