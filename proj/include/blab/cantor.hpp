#pragma once

#include "blab/rational.hpp"

#include <complex>
#include <iosfwd>
#include <vector>

namespace blab::cantor {

/// Middle-fifth removal scheme. ProportionalFifth removes the centered open
/// fifth of every surviving interval (stage lengths (2/5)^k, measure -> 0);
/// AbsoluteFifth removes a centered interval of absolute length 5^-k from
/// each (measure -> 2/3). Both are exposed because they disagree beyond the
/// printed stage lists; AbsoluteFifth is the default since the deformation
/// constructions need a limit set of positive measure.
enum class Scheme { AbsoluteFifth, ProportionalFifth };

const char* schemeName(Scheme s);

struct Interval {
    Rational lo, hi;
    Rational length() const { return hi - lo; }
    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

class IntervalSet {
public:
    static constexpr int kMaxStage = 64;             // exact-measure budget
    static constexpr int kMaxMaterializedStage = 20; // 2^k interval lists

    /// Stage-k set of the 1/5-Cantor construction on [0,1].
    /// Throws std::length_error past the materialization budget.
    static IntervalSet stage(int k, Scheme scheme);

    /// Exact stage-k measure through the removal recursion, without
    /// materializing the 2^k intervals. Valid for k <= kMaxStage.
    static Rational stageMeasure(int k, Scheme scheme);

    const std::vector<Interval>& intervals() const { return intervals_; }
    int stageIndex() const { return stage_; }
    Scheme scheme() const { return scheme_; }

    Rational measure() const;
    Rational removedThroughStage() const { return 1 - measure(); }

    /// Exact \int r dr and \int r^2 dr over the set.
    Rational radialMoment1() const;
    Rational radialMoment2() const;

    bool contains(const Rational& x) const;
    bool contains(double x) const;

    /// Limit measure of the full (infinite-stage) construction.
    static Rational limitMeasure(Scheme scheme);

    bool symmetricAboutHalf() const;

    // CSV columns: lo_num, lo_den, hi_num, hi_den
    void writeCsv(std::ostream& os) const;
    static std::vector<Interval> readCsv(std::istream& is);

private:
    IntervalSet(std::vector<Interval> iv, int stage, Scheme scheme);

    std::vector<Interval> intervals_;
    std::vector<double> endpointsD_;  // flattened lo,hi pairs for float lookups
    int stage_ = 0;
    Scheme scheme_ = Scheme::AbsoluteFifth;
};

/// Rotation body {r e^{i t} : r in lambda*base} in the disk. Membership
/// depends only on |z|.
class RadialCantorSet {
public:
    RadialCantorSet(IntervalSet base, Rational lambda);

    const IntervalSet& base() const { return base_; }
    const Rational& lambda() const { return lambda_; }
    double lambdaD() const { return lambdaD_; }

    bool contains(std::complex<double> z) const;

    /// Scaled interval endpoints in [0, lambda], sorted, as doubles.
    /// These are the radii where piecewise-radial integrands jump.
    std::vector<double> scaledEndpoints() const;

    /// area = areaCoef * pi, exactly; likewise the first radial moment
    /// \iint_S |z| dA = momentCoef * pi.
    Rational areaCoef() const;   // lambda^2 * measure(base)
    Rational momentCoef() const; // 2 lambda^3 * \int_base r^2 dr

private:
    IntervalSet base_;
    Rational lambda_;
    double lambdaD_;
};

struct Ring {
    Rational lo, hi;  // open annulus lo < |z| < hi; lo == 0 means a punctured-center disk
};

/// Disjoint open annuli covering {|z| <= lambda} minus the radial set.
class RingSystem {
public:
    static RingSystem complementOf(const RadialCantorSet& s);

    const std::vector<Ring>& rings() const { return rings_; }

    /// Exact check: ring radii together with the set's scaled intervals
    /// tile [0, lambda] with no overlap and no gap.
    bool tilesWith(const RadialCantorSet& s) const;

private:
    std::vector<Ring> rings_;
};

}  // namespace blab::cantor
