#include "blab/cantor.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace blab;
using cantor::IntervalSet;
using cantor::RadialCantorSet;
using cantor::RingSystem;
using cantor::Scheme;

namespace {

IntervalSet stage(int k, Scheme s) { return IntervalSet::stage(k, s); }

bool sameIntervals(const IntervalSet& s, const std::vector<std::pair<Rational, Rational>>& ref) {
    const auto& iv = s.intervals();
    if (iv.size() != ref.size()) return false;
    for (size_t i = 0; i < iv.size(); ++i)
        if (iv[i].lo != ref[i].first || iv[i].hi != ref[i].second) return false;
    return true;
}

}  // namespace

TEST_CASE("stage lists match the printed construction") {
    for (auto s : {Scheme::AbsoluteFifth, Scheme::ProportionalFifth}) {
        CHECK(sameIntervals(stage(1, s), {{rat(0), rat(2, 5)}, {rat(3, 5), rat(1)}}));
        CHECK(sameIntervals(stage(0, s), {{rat(0), rat(1)}}));
    }
    CHECK(sameIntervals(stage(2, Scheme::ProportionalFifth),
                        {{rat(0), rat(4, 25)},
                         {rat(6, 25), rat(2, 5)},
                         {rat(3, 5), rat(19, 25)},
                         {rat(21, 25), rat(1)}}));
    CHECK(sameIntervals(stage(2, Scheme::AbsoluteFifth),
                        {{rat(0), rat(9, 50)},
                         {rat(11, 50), rat(2, 5)},
                         {rat(3, 5), rat(39, 50)},
                         {rat(41, 50), rat(1)}}));
}

TEST_CASE("interval counts and lengths") {
    for (int k = 0; k <= 10; ++k) {
        auto p = stage(k, Scheme::ProportionalFifth);
        CHECK(p.intervals().size() == (size_t)(1ll << k));
        for (const auto& iv : p.intervals()) {
            Rational len(1);
            for (int i = 0; i < k; ++i) len *= Rational(2, 5);
            CHECK(iv.length() == len);
        }
        auto a = stage(k, Scheme::AbsoluteFifth);
        CHECK(a.intervals().size() == (size_t)(1ll << k));
    }
}

TEST_CASE("measures are exact") {
    CHECK(stage(1, Scheme::AbsoluteFifth).measure() == rat(4, 5));
    CHECK(stage(1, Scheme::ProportionalFifth).measure() == rat(4, 5));

    // proportional: every step multiplies total length by 4/5
    Rational expect(1);
    for (int k = 0; k <= 10; ++k) {
        CHECK(stage(k, Scheme::ProportionalFifth).measure() == expect);
        expect *= Rational(4, 5);
    }

    // absolute: removed total through stage k is sum 2^{j-1}/5^j
    for (int k = 0; k <= 12; ++k) {
        Rational removed(0), pow5(1);
        for (int j = 1; j <= k; ++j) {
            pow5 *= 5;
            removed += Rational(BigInt(1) << (j - 1), BigInt(pow5));
        }
        auto s = stage(k, Scheme::AbsoluteFifth);
        CHECK(s.measure() == 1 - removed);
        CHECK(s.measure() + s.removedThroughStage() == Rational(1));
    }

    CHECK(IntervalSet::limitMeasure(Scheme::AbsoluteFifth) == rat(2, 3));
    CHECK(IntervalSet::limitMeasure(Scheme::ProportionalFifth) == rat(0));

    // the recursion and the materialized lists agree
    for (int k = 0; k <= 12; ++k)
        for (auto sch : {Scheme::AbsoluteFifth, Scheme::ProportionalFifth})
            CHECK(stage(k, sch).measure() == IntervalSet::stageMeasure(k, sch));

    // stage 30 decimal sits a computable tail above 2/3
    Rational m30 = IntervalSet::stageMeasure(30, Scheme::AbsoluteFifth);
    Rational tail = m30 - rat(2, 3);
    CHECK(tail > 0);
    CHECK(toDouble(tail) < 1e-11);
    CHECK(toDouble(m30) == doctest::Approx(2.0 / 3.0 + toDouble(tail)).epsilon(1e-14));
}

TEST_CASE("membership") {
    auto s1 = stage(1, Scheme::AbsoluteFifth);
    CHECK_FALSE(s1.contains(rat(1, 2)));
    CHECK(s1.contains(rat(2, 5)));
    for (int k = 0; k <= 10; ++k) {
        CHECK(stage(k, Scheme::AbsoluteFifth).contains(rat(0)));
        CHECK(stage(k, Scheme::AbsoluteFifth).contains(rat(1)));
    }
    CHECK_FALSE(stage(2, Scheme::ProportionalFifth).contains(rat(5, 25)));
    CHECK(stage(2, Scheme::ProportionalFifth).contains(0.1));
    CHECK_FALSE(stage(2, Scheme::ProportionalFifth).contains(0.2));
}

TEST_CASE("stage monotonicity and symmetry") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(0, 1000);
    for (auto sch : {Scheme::AbsoluteFifth, Scheme::ProportionalFifth}) {
        for (int k = 0; k < 8; ++k) {
            auto coarse = stage(k, sch);
            auto fine = stage(k + 1, sch);
            for (const auto& iv : fine.intervals()) {
                CHECK(coarse.contains(iv.lo));
                CHECK(coarse.contains(iv.hi));
            }
            CHECK(coarse.symmetricAboutHalf());
            for (int t = 0; t < 50; ++t) {
                Rational x(num(rng), 1000);
                CHECK(coarse.contains(x) == coarse.contains(1 - x));
            }
        }
    }
}

TEST_CASE("radial set membership and moments") {
    auto base = stage(1, Scheme::AbsoluteFifth);
    RadialCantorSet s(base, rat(4, 5));
    CHECK(s.contains({0.0, 0.0}));
    CHECK_FALSE(s.contains({0.4, 0.0}));  // |z|/lambda = 1/2, removed
    CHECK_FALSE(s.contains({0.81, 0.0}));
    CHECK(s.contains({0.0, 0.79}));

    // symmetry about 1/2 forces the first radial moment to half the measure
    for (int k = 0; k <= 10; ++k) {
        auto b = stage(k, Scheme::AbsoluteFifth);
        CHECK(b.radialMoment1() == b.measure() / 2);
    }

    // areaCoef = lambda^2 * measure -> 2/3 as lambda -> 1, stage -> inf;
    // exact interval sums at a materialized stage back the recursion value
    auto b16 = stage(16, Scheme::AbsoluteFifth);
    CHECK(b16.measure() == IntervalSet::stageMeasure(16, Scheme::AbsoluteFifth));
    CHECK(b16.radialMoment1() == b16.measure() / 2);
    CHECK(toDouble(RadialCantorSet(b16, rat(999999, 1000000)).areaCoef()) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-3));

    auto b6 = stage(6, Scheme::AbsoluteFifth);
    RadialCantorSet whole(b6, rat(1, 2));
    RadialCantorSet twice(b6, rat(999999999, 1000000000));
    CHECK(toDouble(whole.areaCoef()) ==
          doctest::Approx(toDouble(twice.areaCoef()) / 4).epsilon(1e-6));
}

TEST_CASE("ring system tiles the sub-disk") {
    auto s1 = RadialCantorSet(stage(1, Scheme::AbsoluteFifth), rat(999999, 1000000));
    auto rings1 = RingSystem::complementOf(s1);
    REQUIRE(rings1.rings().size() == 1);
    CHECK(rings1.rings()[0].lo == rat(2, 5) * s1.lambda());
    CHECK(rings1.rings()[0].hi == rat(3, 5) * s1.lambda());

    auto s0 = RadialCantorSet(stage(0, Scheme::AbsoluteFifth), rat(1, 2));
    CHECK(RingSystem::complementOf(s0).rings().empty());

    auto s2 = RadialCantorSet(stage(2, Scheme::ProportionalFifth), rat(4, 5));
    auto rings2 = RingSystem::complementOf(s2);
    REQUIRE(rings2.rings().size() == 3);
    CHECK(rings2.rings()[0].lo == rat(4, 25) * s2.lambda());
    CHECK(rings2.rings()[0].hi == rat(6, 25) * s2.lambda());

    for (int k = 0; k <= 8; ++k) {
        RadialCantorSet s(stage(k, Scheme::AbsoluteFifth), rat(4, 5));
        CHECK(RingSystem::complementOf(s).tilesWith(s));
    }
}

TEST_CASE("sampled area matches the exact area") {
    auto base = stage(6, Scheme::AbsoluteFifth);
    RadialCantorSet s(base, rat(4, 5));
    const double lam = s.lambdaD();
    const int N = 1000000;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-lam, lam);
    long long hits = 0;
    for (int i = 0; i < N; ++i) {
        const std::complex<double> z{unif(rng), unif(rng)};
        if (s.contains(z)) ++hits;
    }
    const double boxArea = 4.0 * lam * lam;
    const double est = boxArea * (double)hits / N;
    const double exact = 3.14159265358979323846 * toDouble(s.areaCoef());
    const double p = exact / boxArea;
    const double sigma = boxArea * std::sqrt(p * (1 - p) / N);
    CHECK(std::abs(est - exact) <= 3 * sigma);
}

TEST_CASE("csv round trip") {
    auto s = stage(5, Scheme::AbsoluteFifth);
    std::stringstream ss;
    s.writeCsv(ss);
    auto back = IntervalSet::readCsv(ss);
    REQUIRE(back.size() == s.intervals().size());
    for (size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].lo == s.intervals()[i].lo);
        CHECK(back[i].hi == s.intervals()[i].hi);
    }
}

TEST_CASE("stage budget and argument errors") {
    CHECK_THROWS_AS(stage(21, Scheme::AbsoluteFifth), std::length_error);
    CHECK_THROWS_AS(IntervalSet::stageMeasure(65, Scheme::AbsoluteFifth), std::length_error);
    CHECK_THROWS_AS(stage(-1, Scheme::AbsoluteFifth), std::invalid_argument);
    CHECK_THROWS_AS(RadialCantorSet(stage(1, Scheme::AbsoluteFifth), rat(3, 2)),
                    std::invalid_argument);
}
