#include "blab/cantor.hpp"

#include <algorithm>
#include <ostream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace blab::cantor {

const char* schemeName(Scheme s) {
    return s == Scheme::AbsoluteFifth ? "absolute-fifth" : "proportional-fifth";
}

IntervalSet::IntervalSet(std::vector<Interval> iv, int stage, Scheme scheme)
    : intervals_(std::move(iv)), stage_(stage), scheme_(scheme) {
    endpointsD_.reserve(intervals_.size() * 2);
    for (const auto& i : intervals_) {
        endpointsD_.push_back(toDouble(i.lo));
        endpointsD_.push_back(toDouble(i.hi));
    }
}

IntervalSet IntervalSet::stage(int k, Scheme scheme) {
    if (k < 0) throw std::invalid_argument("cantor stage must be >= 0");
    if (k > kMaxMaterializedStage)
        throw std::length_error(
            "cantor stage exceeds the interval-list budget (20); use stageMeasure for exact "
            "measures up to 64");

    std::vector<Interval> cur{{Rational(0), Rational(1)}};
    Rational pow5(1);
    for (int step = 1; step <= k; ++step) {
        pow5 *= 5;
        std::vector<Interval> next;
        next.reserve(cur.size() * 2);
        for (const Interval& iv : cur) {
            Rational gap = (scheme == Scheme::AbsoluteFifth)
                               ? Rational(1) / pow5
                               : iv.length() / 5;
            Rational mid = (iv.lo + iv.hi) / 2;
            next.push_back({iv.lo, mid - gap / 2});
            next.push_back({mid + gap / 2, iv.hi});
        }
        cur = std::move(next);
    }
    return IntervalSet(std::move(cur), k, scheme);
}

Rational IntervalSet::stageMeasure(int k, Scheme scheme) {
    if (k < 0) throw std::invalid_argument("cantor stage must be >= 0");
    if (k > kMaxStage)
        throw std::length_error("cantor stage exceeds the rational-arithmetic budget (64)");
    if (scheme == Scheme::ProportionalFifth) {
        Rational m(1);
        for (int j = 1; j <= k; ++j) m *= Rational(4, 5);
        return m;
    }
    Rational removed(0), pow5(1);
    for (int j = 1; j <= k; ++j) {
        pow5 *= 5;
        removed += Rational(BigInt(1) << (j - 1), BigInt(pow5));
    }
    return 1 - removed;
}

Rational IntervalSet::measure() const {
    Rational m(0);
    for (const auto& iv : intervals_) m += iv.length();
    return m;
}

Rational IntervalSet::radialMoment1() const {
    Rational m(0);
    for (const auto& iv : intervals_) m += (iv.hi * iv.hi - iv.lo * iv.lo);
    return m / 2;
}

Rational IntervalSet::radialMoment2() const {
    Rational m(0);
    for (const auto& iv : intervals_)
        m += (iv.hi * iv.hi * iv.hi - iv.lo * iv.lo * iv.lo);
    return m / 3;
}

bool IntervalSet::contains(const Rational& x) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](const Rational& v, const Interval& iv) { return v < iv.lo; });
    if (it == intervals_.begin()) return false;
    --it;
    return x >= it->lo && x <= it->hi;
}

bool IntervalSet::contains(double x) const {
    if (endpointsD_.empty()) return false;
    // position of x in the flattened lo,hi list decides membership
    auto it = std::upper_bound(endpointsD_.begin(), endpointsD_.end(), x);
    if (it == endpointsD_.begin()) return false;
    const size_t idx = (size_t)(it - endpointsD_.begin()) - 1;
    // inside an interval iff the preceding endpoint is a lo (even index) or x
    // sits exactly on an endpoint
    return (idx % 2 == 0) || endpointsD_[idx] == x;
}

Rational IntervalSet::limitMeasure(Scheme scheme) {
    // AbsoluteFifth: 1 - sum_{k>=1} 2^{k-1}/5^k = 1 - (1/5)/(1-2/5) = 2/3.
    // ProportionalFifth: measure (4/5)^k -> 0.
    return scheme == Scheme::AbsoluteFifth ? Rational(2, 3) : Rational(0);
}

bool IntervalSet::symmetricAboutHalf() const {
    const size_t n = intervals_.size();
    for (size_t i = 0; i < n; ++i) {
        const Interval& a = intervals_[i];
        const Interval& b = intervals_[n - 1 - i];
        if (a.lo != 1 - b.hi || a.hi != 1 - b.lo) return false;
    }
    return true;
}

void IntervalSet::writeCsv(std::ostream& os) const {
    os << "lo_num,lo_den,hi_num,hi_den\n";
    for (const auto& iv : intervals_) {
        os << numerator(iv.lo).str() << ',' << denominator(iv.lo).str() << ','
           << numerator(iv.hi).str() << ',' << denominator(iv.hi).str() << '\n';
    }
}

std::vector<Interval> IntervalSet::readCsv(std::istream& is) {
    std::vector<Interval> out;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (header) { header = false; continue; }
        std::istringstream ss(line);
        std::string tok;
        BigInt parts[4];
        for (int i = 0; i < 4; ++i) {
            if (!std::getline(ss, tok, ',')) throw std::runtime_error("malformed interval CSV row");
            parts[i] = BigInt(tok);
        }
        out.push_back({Rational(parts[0], parts[1]), Rational(parts[2], parts[3])});
    }
    return out;
}

RadialCantorSet::RadialCantorSet(IntervalSet base, Rational lambda)
    : base_(std::move(base)), lambda_(std::move(lambda)), lambdaD_(toDouble(lambda_)) {
    if (lambda_ <= 0 || lambda_ >= 1)
        throw std::invalid_argument("radial scale lambda must lie in (0,1)");
}

bool RadialCantorSet::contains(std::complex<double> z) const {
    const double r = std::abs(z);
    if (r > lambdaD_) return false;
    return base_.contains(r / lambdaD_);
}

std::vector<double> RadialCantorSet::scaledEndpoints() const {
    std::vector<double> out;
    out.reserve(base_.intervals().size() * 2);
    for (const auto& iv : base_.intervals()) {
        out.push_back(toDouble(iv.lo * lambda_));
        out.push_back(toDouble(iv.hi * lambda_));
    }
    return out;
}

Rational RadialCantorSet::areaCoef() const {
    // 2 lambda^2 \int_base r dr; the base is symmetric about 1/2 so the
    // radial moment equals measure/2.
    return 2 * lambda_ * lambda_ * base_.radialMoment1();
}

Rational RadialCantorSet::momentCoef() const {
    return 2 * lambda_ * lambda_ * lambda_ * base_.radialMoment2();
}

RingSystem RingSystem::complementOf(const RadialCantorSet& s) {
    RingSystem sys;
    const auto& iv = s.base().intervals();
    const Rational& lam = s.lambda();
    if (iv.empty()) {
        sys.rings_.push_back({Rational(0), lam});
        return sys;
    }
    if (iv.front().lo > 0)
        sys.rings_.push_back({Rational(0), iv.front().lo * lam});
    for (size_t i = 0; i + 1 < iv.size(); ++i)
        sys.rings_.push_back({iv[i].hi * lam, iv[i + 1].lo * lam});
    if (iv.back().hi < 1)
        sys.rings_.push_back({iv.back().hi * lam, lam});
    return sys;
}

bool RingSystem::tilesWith(const RadialCantorSet& s) const {
    // Merge both sorted families and require exact adjacency from 0 to lambda.
    struct Piece { Rational lo, hi; };
    std::vector<Piece> pieces;
    for (const auto& r : rings_) pieces.push_back({r.lo, r.hi});
    for (const auto& iv : s.base().intervals())
        pieces.push_back({iv.lo * s.lambda(), iv.hi * s.lambda()});
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    Rational cursor(0);
    for (const auto& p : pieces) {
        if (p.lo != cursor) return false;
        cursor = p.hi;
    }
    return cursor == s.lambda();
}

}  // namespace blab::cantor
