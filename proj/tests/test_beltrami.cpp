#include "blab/beltrami.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace blab;
using field::BeltramiField;
using field::Complex;
using field::EvalPolicy;
using field::QuadraticDifferential;
using field::SupportMask;

namespace {

constexpr double kPi = std::numbers::pi;

cantor::RadialCantorSet defaultSet(int stage = 6) {
    return {cantor::IntervalSet::stage(stage, cantor::Scheme::AbsoluteFifth), rat(4, 5)};
}

quad::DiskRule alignedRule(const cantor::RadialCantorSet& s) {
    auto breaks = s.scaledEndpoints();
    breaks.push_back(s.lambdaD());
    return quad::DiskRule::alignedTo(std::move(breaks), 4, 32);
}

Complex randomDiskPoint(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    while (true) {
        Complex z{unif(rng), unif(rng)};
        if (std::abs(z) < 1.0) return z;
    }
}

}  // namespace

TEST_CASE("sgn") {
    CHECK(field::sgn({0.0, 0.0}) == Complex(0.0, 0.0));
    CHECK(std::abs(field::sgn({3.0, 4.0}) - Complex(0.6, 0.8)) < 1e-15);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        const Complex z = randomDiskPoint(rng) + Complex(0.1, 0.0);
        CHECK(std::abs(std::abs(field::sgn(z)) - 1.0) < 1e-14);
    }
}

TEST_CASE("L1 norms") {
    auto rule = quad::DiskRule::polar(16, 4, 64);
    CHECK(field::l1Norm(QuadraticDifferential::monomial(0), rule).value ==
          doctest::Approx(kPi).epsilon(1e-12));
    CHECK(field::l1Norm(QuadraticDifferential::monomial(1), rule).value ==
          doctest::Approx(2 * kPi / 3).epsilon(1e-12));
    for (int n = 0; n <= 6; ++n) {
        auto quadd = field::l1Norm(QuadraticDifferential::monomial(n), rule,
                                   EvalPolicy::Quadrature);
        CHECK(quadd.value == doctest::Approx(2 * kPi / (n + 2)).epsilon(1e-9));
    }

    SUBCASE("concentrating kernel norm stays pi") {
        // (1-x^2)^2/(1-xz)^4 has unit Bergman-type mass for every x
        auto phi = QuadraticDifferential::kernel(0.9, 2, 4, 0);
        CHECK(field::l1Norm(phi, rule).value == doctest::Approx(kPi).epsilon(1e-10));
        auto refined = rule.refineNear({1.0, 0.0}, 2.0);
        auto q1 = field::l1Norm(phi, refined, EvalPolicy::Quadrature).value;
        auto deeper = rule.refineNear({1.0, 0.0}, 3.0);
        auto q2 = field::l1Norm(phi, deeper, EvalPolicy::Quadrature).value;
        CHECK(q1 == doctest::Approx(kPi).epsilon(1e-5));
        CHECK(q2 == doctest::Approx(kPi).epsilon(1e-7));
    }

    SUBCASE("boundary powers match the Gamma closed form") {
        auto phi = QuadraticDifferential::kernel(0.0, 0, 0, 1.2);
        const double closed =
            kPi * std::exp(std::lgamma(2.0 - 1.2) - 2.0 * std::lgamma(2.0 - 0.6));
        CHECK(field::l1Norm(phi, rule).value == doctest::Approx(closed).epsilon(1e-12));
        auto refined = rule.refineNear({1.0, 0.0}, 3.0);
        CHECK(field::l1Norm(phi, refined, EvalPolicy::Quadrature).value ==
              doctest::Approx(closed).epsilon(1e-4));
    }

    CHECK_THROWS_AS(field::l1Norm(QuadraticDifferential::boundarySingular(), rule),
                    field::InfiniteNormError);
}

TEST_CASE("Teichmuller forms") {
    auto one = QuadraticDifferential::monomial(0);
    auto eta = field::teichmullerForm(0.5, one);
    CHECK(eta.value({0.3, 0.2}) == Complex(0.5, 0.0));
    CHECK(eta.essSup() == 0.5);

    auto etaZ = field::teichmullerForm(0.25, QuadraticDifferential::monomial(1));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const Complex z = randomDiskPoint(rng);
        if (std::abs(z) < 1e-6) continue;
        CHECK(std::abs(std::abs(etaZ.value(z)) - 0.25) < 1e-14);
        CHECK(std::abs(etaZ.value(z) - 0.25 * std::conj(z) / std::abs(z)) < 1e-14);
    }

    auto eta0 = field::teichmullerForm(0.5, QuadraticDifferential::boundarySingular());
    for (int i = 0; i < 10000; ++i) {
        const Complex z = randomDiskPoint(rng);
        CHECK(std::abs(std::abs(eta0.value(z)) - 0.5) < 1e-12);
    }

    CHECK_THROWS_AS(field::teichmullerForm(0.0, one), std::domain_error);
    CHECK_THROWS_AS(field::teichmullerForm(1.0, one), std::domain_error);
    CHECK_THROWS_AS(field::teichmullerForm(0.5, QuadraticDifferential::polynomial({})),
                    std::invalid_argument);
}

TEST_CASE("deformations") {
    auto set = defaultSet(1);
    auto mask = SupportMask::radialCantor(set);
    auto eta = field::teichmullerForm(0.5, QuadraticDifferential::monomial(0));

    SUBCASE("kappa = 1 is the identity deformation") {
        auto mu = field::deform(eta, [](Complex) { return 1.0; }, 1.0, mask);
        std::mt19937_64 rng(5);
        for (int i = 0; i < 500; ++i) {
            const Complex z = randomDiskPoint(rng);
            CHECK(mu.value(z) == eta.value(z));
        }
    }

    SUBCASE("constant kappa splits by membership") {
        auto mu = field::deform(eta, 0.5, mask);
        std::mt19937_64 rng(6);
        for (int i = 0; i < 2000; ++i) {
            const Complex z = randomDiskPoint(rng);
            const double expect = mask.contains(z) ? 0.25 : 0.5;
            CHECK(std::abs(std::abs(mu.value(z)) - expect) < 1e-14);
            CHECK(std::abs(mu.value(z)) <= std::abs(eta.value(z)) + 1e-15);
        }
        CHECK(mu.essSup() == 0.5);
    }

    SUBCASE("full deformed field matches kappa(z) k pointwise") {
        auto set6 = defaultSet(6);
        auto mask6 = SupportMask::radialCantor(set6);
        auto eta0 = field::teichmullerForm(0.5, QuadraticDifferential::boundarySingular());
        auto mu = field::deform(eta0, 0.5, mask6);
        std::mt19937_64 rng(7);
        for (int i = 0; i < 10000; ++i) {
            const Complex z = randomDiskPoint(rng);
            const double expect = mask6.contains(z) ? 0.25 : 0.5;
            CHECK(std::abs(std::abs(mu.value(z)) - expect) < 1e-12);
        }
    }

    CHECK_THROWS_AS(field::deform(eta, 1.5, mask), std::invalid_argument);
    CHECK_NOTHROW(field::deform(eta, [](Complex) { return 1.2; }, 1.2, mask, true));
}

TEST_CASE("perturbation fields") {
    auto set = defaultSet(4);
    auto gamma1 = field::perturbation(1, set);
    auto gamma3 = field::perturbation(3, set);
    std::mt19937_64 rng(9);
    double sampledMax = 0.0;
    for (int i = 0; i < 5000; ++i) {
        const Complex z = randomDiskPoint(rng);
        if (set.contains(z)) {
            CHECK(gamma1.value(z) == z);
            CHECK(std::abs(gamma3.value(z) - z * z * z) < 1e-15);
            sampledMax = std::max(sampledMax, std::abs(gamma3.value(z)));
        } else {
            CHECK(gamma1.value(z) == Complex(0.0, 0.0));
        }
    }
    CHECK(sampledMax <= gamma3.essSup() + 1e-15);
    CHECK(gamma3.essSup() == doctest::Approx(std::pow(0.8, 3)));
    CHECK_THROWS_AS(field::perturbation(0, set), std::invalid_argument);
}

TEST_CASE("pairings") {
    auto rule = quad::DiskRule::polar(16, 4, 64);
    auto one = QuadraticDifferential::monomial(0);

    auto c = BeltramiField::constant({0.3, -0.2});
    auto p = field::pairing(c, one, rule);
    CHECK(std::abs(p.value - Complex(0.3, -0.2) * kPi) < 1e-12);
    auto pq = field::pairing(c, one, rule, EvalPolicy::Quadrature);
    CHECK(std::abs(pq.value - Complex(0.3, -0.2) * kPi) < 1e-12);

    SUBCASE("Teichmuller form pairs to k times the norm of its own phi") {
        auto phi = QuadraticDifferential::polynomial({{0.2, 0.1}, {0, 0}, {1.0, 0}});
        auto eta = field::teichmullerForm(0.4, phi);
        auto norm = field::l1Norm(phi, rule, EvalPolicy::Quadrature);
        auto pair = field::pairing(eta, phi, rule, EvalPolicy::Quadrature);
        CHECK(std::abs(pair.value.imag()) < 1e-12);
        CHECK(pair.value.real() == doctest::Approx(0.4 * norm.value).epsilon(1e-12));
    }

    SUBCASE("closed forms against the boundary-singular form agree with quadrature") {
        auto eta0 = field::teichmullerForm(0.5, QuadraticDifferential::boundarySingular());
        auto refined = rule.refineNear({1.0, 0.0}, 3.0);
        for (int n = 0; n <= 4; ++n) {
            auto zn = QuadraticDifferential::monomial(n);
            auto analytic = field::pairing(eta0, zn, rule);
            CHECK(analytic.analytic);
            CHECK(std::abs(analytic.value - Complex(0.5 * kPi / ((n + 1.0) * (n + 2.0)), 0)) <
                  1e-14);
            auto direct = field::pairing(eta0, zn, refined, EvalPolicy::Quadrature);
            CHECK(std::abs(direct.value - analytic.value) < 1e-6);
        }

        // Mobius kernels: the series closed form equals the elementary one
        for (double x : {0.3, 0.5, 0.9}) {
            auto psi = QuadraticDifferential::kernel(x, 2, 4, 0);
            auto analytic = field::pairing(eta0, psi, rule);
            const double elementary = 0.5 * kPi * (1 + x) * (1 + x) * (3 - 2 * x) / 6.0;
            CHECK(analytic.value.real() == doctest::Approx(elementary).epsilon(1e-12));
            CHECK(std::abs(analytic.value.imag()) < 1e-12);
            if (x <= 0.5) {
                auto direct = field::pairing(eta0, psi, refined, EvalPolicy::Quadrature);
                CHECK(std::abs(direct.value - analytic.value) < 1e-6);
            }
        }

        // boundary powers: pi k/(2-c)
        auto pc = QuadraticDifferential::kernel(0.0, 0, 0, 1.2);
        auto analytic = field::pairing(eta0, pc, rule);
        CHECK(analytic.value.real() == doctest::Approx(0.5 * kPi / 0.8).epsilon(1e-13));
        auto direct = field::pairing(eta0, pc, refined, EvalPolicy::Quadrature);
        CHECK(std::abs(direct.value - analytic.value) < 2e-4);
    }

    CHECK_THROWS_AS(field::pairing(c, QuadraticDifferential::boundarySingular(), rule),
                    field::InfiniteNormError);
}

TEST_CASE("moment vanishing, both routes") {
    auto set = defaultSet(6);
    auto rule = alignedRule(set);
    for (int m : {1, 2}) {
        auto gamma = field::perturbation(m, set);
        for (int n = 0; n <= 6; ++n) {
            auto zn = QuadraticDifferential::monomial(n);
            const Complex direct = field::pairing(gamma, zn, rule, EvalPolicy::Quadrature).value;
            const Complex closed = field::perturbationMomentClosedForm(gamma, n);
            CHECK(std::abs(direct) <= 1e-10);
            CHECK(std::abs(closed) <= 1e-14);
            CHECK(std::abs(direct - closed) <= 1e-10);
        }
    }
}

TEST_CASE("pairings of mu and mu + t gamma agree on monomials") {
    auto set = defaultSet(6);
    auto rule = alignedRule(set);
    auto eta0 = field::teichmullerForm(0.5, QuadraticDifferential::boundarySingular());
    auto mu = field::deform(eta0, 0.5, SupportMask::radialCantor(set));
    auto gamma = field::perturbation(1, set);
    for (double t : {0.1, 0.01}) {
        auto nu = mu.plus(t, gamma);
        for (int n = 0; n <= 15; n += 3) {
            auto zn = QuadraticDifferential::monomial(n);
            const Complex a = field::pairing(mu, zn, rule, EvalPolicy::Quadrature).value;
            const Complex b = field::pairing(nu, zn, rule, EvalPolicy::Quadrature).value;
            CHECK(std::abs(a - b) <= 1e-6 * t);
        }
    }
}

TEST_CASE("delta functional") {
    auto rule = quad::DiskRule::polar(16, 4, 64);

    SUBCASE("vanishes for a form against its own phi") {
        for (auto phi : {QuadraticDifferential::monomial(2),
                         QuadraticDifferential::polynomial({{1, 0}, {0.5, 0.3}}),
                         QuadraticDifferential::kernel(0.5, 2, 4, 0)}) {
            auto eta = field::teichmullerForm(0.5, phi);
            auto norm = field::l1Norm(phi, rule, EvalPolicy::Quadrature);
            auto d = field::delta(eta, phi, rule, EvalPolicy::Quadrature);
            CHECK(std::abs(d.value) <= 1e-8 * norm.value);
        }
    }

    SUBCASE("constant field against z") {
        auto c = BeltramiField::constant({0.5, 0.0});
        auto d = field::delta(c, QuadraticDifferential::monomial(1), rule);
        CHECK(d.value == doctest::Approx(2 * kPi * 0.5 / 3).epsilon(1e-10));
    }

    SUBCASE("sweep toward the boundary singularity decreases delta") {
        auto set = defaultSet(6);
        auto rule6 = alignedRule(set);
        auto eta0 = field::teichmullerForm(0.5, QuadraticDifferential::boundarySingular());
        auto mu = field::deform(eta0, 0.5, SupportMask::radialCantor(set));
        double prev = 1e300;
        for (double x : {0.9, 0.99, 0.999}) {
            auto phi = QuadraticDifferential::kernel(x, 0, 0, 1 + x);
            const double norm = field::l1Norm(phi, rule6).value;
            auto d = field::delta(mu, phi, rule6);
            const double dhat = d.value / norm;
            CHECK(dhat > 0);
            CHECK(dhat < prev);
            prev = dhat;
        }
        CHECK(prev < 5e-4);
    }
}

TEST_CASE("essential sup estimates and landslide probes") {
    auto set = defaultSet(6);
    auto mask = SupportMask::radialCantor(set);
    auto eta0 = field::teichmullerForm(0.5, QuadraticDifferential::boundarySingular());
    auto mu = field::deform(eta0, 0.5, mask);

    SUBCASE("constant field") {
        auto c = BeltramiField::constant({0.5, 0.0});
        auto est = field::essSupOn(c, SupportMask::wholeDisk(), 5000);
        CHECK(est.value == doctest::Approx(0.5));
    }

    SUBCASE("restriction to the deformation support sees kappa k") {
        auto est = field::essSupOn(mu, mask, 20000);
        CHECK(est.value == doctest::Approx(0.25).epsilon(1e-9));
    }

    SUBCASE("small disks always meet the complement") {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> unif(-0.85, 0.85);
        for (int i = 0; i < 20; ++i) {
            Complex c{unif(rng), unif(rng)};
            if (std::abs(c) > 0.85) continue;
            auto est = field::essSupOn(mu, SupportMask::disk(c, 0.05), 10000, 77 + i);
            CHECK(est.value == doctest::Approx(0.5).epsilon(1e-9));
        }
    }

    SUBCASE("region not hit") {
        SupportMask never([](Complex) { return false; }, "empty");
        CHECK_THROWS_WITH_AS(field::essSupOn(mu, never, 2000), doctest::Contains("region not hit"),
                             std::runtime_error);
    }

    SUBCASE("probe verdicts") {
        std::vector<field::DiskSpec> disks{{{0.3, 0.0}, 0.05}, {{0.0, -0.5}, 0.05}};
        auto rep = field::landslideProbe(mu, disks, 10000, 3);
        CHECK_FALSE(rep.landslideEvidence);
        for (const auto& e : rep.entries) CHECK_FALSE(e.gapDetected);

        // control: kappa = 1/2 on an open disk is detectable
        auto control = field::deform(eta0, 0.5, SupportMask::disk({0.3, 0.0}, 0.1));
        auto rep2 = field::landslideProbe(control, disks, 10000, 3);
        CHECK(rep2.landslideEvidence);
        CHECK(rep2.entries[0].gapDetected);
        CHECK(rep2.entries[0].gap == doctest::Approx(0.25).epsilon(1e-6));
        CHECK_FALSE(rep2.entries[1].gapDetected);
    }
}
