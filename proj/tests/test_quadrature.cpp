#include "blab/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace blab;
using quad::Complex;
using quad::DiskRule;
using quad::integrateDisk;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("closed-form disk integrals") {
    auto rule = DiskRule::polar(16, 4, 64);
    CHECK(rule.valid());

    auto one = integrateDisk([](Complex) { return Complex(1.0, 0.0); }, rule);
    CHECK(one.value.real() == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(std::abs(one.value.imag()) < 1e-12);

    auto zc = integrateDisk([](Complex z) { return z; }, rule);
    CHECK(std::abs(zc.value) < 1e-12);

    auto r2 = integrateDisk([](Complex z) { return Complex(std::norm(z), 0.0); }, rule);
    CHECK(r2.value.real() == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("angular orthogonality of monomials") {
    auto rule = DiskRule::polar(12, 4, 64);
    for (int n = 1; n <= 20; ++n) {
        auto v = integrateDisk(
            [n](Complex z) {
                Complex p = 1.0;
                for (int i = 0; i < n; ++i) p *= z;
                return p;
            },
            rule);
        CHECK(std::abs(v.value) < 1e-12);
    }
}

TEST_CASE("linearity over random polynomials") {
    auto rule = DiskRule::polar(10, 4, 32);
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Complex c0{unif(rng), unif(rng)}, c1{unif(rng), unif(rng)}, c2{unif(rng), unif(rng)};
        const double a = unif(rng), b = unif(rng);
        auto f = [c0, c1](Complex z) { return c0 + c1 * z * z; };
        auto g = [c2](Complex z) { return c2 * z + std::conj(z); };
        auto sum = integrateDisk([&](Complex z) { return a * f(z) + b * g(z); }, rule);
        auto fi = integrateDisk(f, rule);
        auto gi = integrateDisk(g, rule);
        const double tol = 1e-12 + sum.errorEstimate + std::abs(a) * fi.errorEstimate +
                           std::abs(b) * gi.errorEstimate;
        CHECK(std::abs(sum.value - (a * fi.value + b * gi.value)) <= tol);
    }
}

TEST_CASE("doubling node count gains at least the declared order") {
    auto f = [](Complex z) { return Complex(std::exp(z.real()) * std::cos(z.imag()), 0.0); };
    auto ref = integrateDisk(f, DiskRule::polar(64, 8, 256)).value.real();
    auto coarse = std::abs(integrateDisk(f, DiskRule::polar(2, 1, 8)).value.real() - ref);
    auto fine = std::abs(integrateDisk(f, DiskRule::polar(4, 1, 16)).value.real() - ref);
    const int order = DiskRule::polar(2, 1, 8).declaredOrder();
    CHECK(fine <= coarse / std::pow(2.0, order) * 1.25);
}

TEST_CASE("refinement near a boundary point") {
    auto base = DiskRule::polar(12, 4, 32);

    SUBCASE("strength zero is the identity") {
        auto same = base.refineNear({1.0, 0.0}, 0.0);
        CHECK(same.nodes().size() == base.nodes().size());
        CHECK(same.totalWeight() == doctest::Approx(base.totalWeight()));
    }

    SUBCASE("off-circle point is rejected") {
        CHECK_THROWS_AS(base.refineNear({0.5, 0.0}, 1.0), std::domain_error);
    }

    SUBCASE("node density grows near the hint") {
        auto refined = base.refineNear({1.0, 0.0}, 4.0);
        CHECK(refined.valid());
        auto countSector = [](const DiskRule& r) {
            int c = 0;
            for (const auto& n : r.nodes())
                if (std::abs(n.z - Complex(1.0, 0.0)) < 0.1) ++c;
            return c;
        };
        CHECK(countSector(refined) >= 4 * std::max(1, countSector(base)));
        CHECK(refined.totalWeight() == doctest::Approx(kPi).epsilon(1e-9));
    }

    SUBCASE("boundary-singular integrand improves under refinement") {
        // oracle: pi Gamma(1/2)/Gamma(5/4)^2 for ||1-z|^{-3/2}|, cross-checked
        // against the refined rule at two strengths
        const double oracle = kPi * std::exp(std::lgamma(0.5) - 2 * std::lgamma(1.25));
        auto f = [](Complex z) {
            return Complex(std::pow(std::abs(1.0 - z), -1.5), 0.0);
        };
        auto plain = integrateDisk(f, base);
        auto refined = integrateDisk(f, base.refineNear({1.0, 0.0}, 3.0));
        auto deeper = integrateDisk(f, base.refineNear({1.0, 0.0}, 4.0));
        CHECK(std::abs(refined.value.real() - oracle) < std::abs(plain.value.real() - oracle));
        CHECK(refined.value.real() == doctest::Approx(oracle).epsilon(1e-4));
        CHECK(deeper.value.real() == doctest::Approx(oracle).epsilon(1e-6));
        CHECK(refined.errorEstimate < plain.errorEstimate);
    }
}

TEST_CASE("aligned rules keep panel-constant integrands exact") {
    // indicator of an annulus aligned to the radial breakpoints
    auto rule = DiskRule::alignedTo({0.3, 0.7}, 4, 32);
    auto v = integrateDisk(
        [](Complex z) {
            const double r = std::abs(z);
            return Complex(r > 0.3 && r < 0.7 ? 1.0 : 0.0, 0.0);
        },
        rule);
    CHECK(v.value.real() == doctest::Approx(kPi * (0.49 - 0.09)).epsilon(1e-13));
    CHECK(v.errorEstimate < 1e-12);
}

TEST_CASE("singular samples are reported with the node") {
    auto rule = DiskRule::polar(4, 2, 8);
    CHECK_THROWS_AS(integrateDisk(
                        [](Complex z) {
                            return std::abs(z) < 0.5 ? Complex(INFINITY, 0.0) : Complex(1.0, 0.0);
                        },
                        rule),
                    quad::SingularSampleError);
}

TEST_CASE("mapped rules integrate over subdisks") {
    auto rule = DiskRule::polar(10, 4, 32).mapped({0.3, 0.1}, 0.2);
    auto area = integrateDisk([](Complex) { return Complex(1.0, 0.0); }, rule);
    CHECK(area.value.real() == doctest::Approx(kPi * 0.04).epsilon(1e-12));
    for (const auto& n : rule.nodes())
        CHECK(std::abs(n.z - Complex(0.3, 0.1)) <= 0.2 + 1e-12);
}

TEST_CASE("node csv export") {
    auto rule = DiskRule::polar(3, 2, 8);
    std::ostringstream os;
    rule.writeCsv(os);
    std::istringstream is(os.str());
    std::string line;
    size_t lines = 0;
    while (std::getline(is, line)) ++lines;
    CHECK(lines == rule.nodes().size() + 1);
}
