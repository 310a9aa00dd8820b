#include "blab/quadrature.hpp"

#include "blab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <mutex>
#include <thread>
#include <numbers>
#include <ostream>

namespace blab::quad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Neumaier-compensated accumulation of complex terms in fixed index order.
struct Accum {
    double sr = 0, cr = 0, si = 0, ci = 0;
    void add(Complex v) {
        addPart(sr, cr, v.real());
        addPart(si, ci, v.imag());
    }
    static void addPart(double& s, double& c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    Complex total() const { return {sr + cr, si + ci}; }
};

std::vector<double> gradedBoundaries(double lo, double hi, double toward, int levels) {
    // Geometric subdivision of [lo,hi] accumulating at `toward` (= lo or hi).
    std::vector<double> bs{lo, hi};
    double span = hi - lo;
    for (int j = 1; j <= levels; ++j) {
        double d = span * std::ldexp(1.0, -j);
        bs.push_back(toward == hi ? hi - d : lo + d);
    }
    std::sort(bs.begin(), bs.end());
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    return bs;
}

}  // namespace

void gaussLegendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess.
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
            }
            pp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * pp * pp);
    }
}

DiskRule DiskRule::polar(int radialPanels, int radialOrder, int angularCount) {
    std::vector<double> breaks(radialPanels + 1);
    for (int i = 0; i <= radialPanels; ++i) breaks[i] = double(i) / radialPanels;
    return alignedTo(std::move(breaks), radialOrder, angularCount);
}

DiskRule DiskRule::alignedTo(std::vector<double> radialBreakpoints,
                             int radialOrder, int angularCount) {
    if (radialOrder < 1 || angularCount < 4)
        throw std::invalid_argument("disk rule needs radialOrder >= 1 and angularCount >= 4");
    radialBreakpoints.push_back(0.0);
    radialBreakpoints.push_back(1.0);
    std::sort(radialBreakpoints.begin(), radialBreakpoints.end());
    radialBreakpoints.erase(std::unique(radialBreakpoints.begin(), radialBreakpoints.end(),
                                        [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                            radialBreakpoints.end());
    if (radialBreakpoints.front() < 0.0 || radialBreakpoints.back() > 1.0)
        throw std::invalid_argument("radial breakpoints must lie in [0,1]");

    DiskRule rule;
    rule.radialBreaks_ = std::move(radialBreakpoints);
    rule.radialOrder_ = radialOrder;
    rule.angularCount_ = angularCount;
    rule.build();
    return rule;
}

DiskRule DiskRule::refineNear(Complex p, double strength) const {
    if (std::abs(std::abs(p) - 1.0) > 1e-12)
        throw std::domain_error("refinement point must lie on the unit circle");
    if (strength < 0.0) throw std::domain_error("refinement strength must be >= 0");
    if (strength == 0.0) return *this;

    DiskRule rule = *this;
    rule.hints_.push_back({p, strength});

    const int levels = std::min(48, (int)std::ceil(10.0 * strength));

    // Radial grading toward r = 1.
    auto rb = rule.radialBreaks_;
    for (double b : gradedBoundaries(0.5, 1.0, 1.0, levels)) rb.push_back(b);
    std::sort(rb.begin(), rb.end());
    rb.erase(std::unique(rb.begin(), rb.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-15; }),
             rb.end());
    rule.radialBreaks_ = std::move(rb);

    // Angular panels accumulate at every hint angle; panel endpoints sit on
    // the hint rays so graded nodes never hit them.
    std::vector<double> ab = rule.angularBreaks_;
    if (ab.empty()) {
        const int coarse = 32;
        for (int i = 0; i < coarse; ++i) ab.push_back(kTwoPi * i / coarse);
        ab.push_back(kTwoPi);
    }
    for (const auto& h : rule.hints_) {
        double t0 = std::arg(h.point);
        if (t0 < 0) t0 += kTwoPi;
        const int lh = std::min(48, (int)std::ceil(10.0 * h.strength));
        for (int j = 0; j <= lh; ++j) {
            double d = std::numbers::pi * std::ldexp(1.0, -j);
            for (double t : {t0 - d, t0 + d, t0}) {
                double tn = std::fmod(t + 2 * kTwoPi, kTwoPi);
                ab.push_back(tn);
            }
        }
    }
    ab.push_back(0.0);
    ab.push_back(kTwoPi);
    std::sort(ab.begin(), ab.end());
    ab.erase(std::unique(ab.begin(), ab.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             ab.end());
    rule.angularBreaks_ = std::move(ab);

    rule.build();
    return rule;
}

DiskRule DiskRule::mapped(Complex center, double rho) const {
    if (rho <= 0.0) throw std::domain_error("mapped disk radius must be positive");
    DiskRule rule = *this;
    rule.center_ = center;
    rule.rho_ = rho;
    rule.build();
    return rule;
}

void DiskRule::build() {
    nodes_.clear();
    coarse_.clear();

    auto emit = [this](std::vector<QuadratureNode>& out, int rOrder, int aScale) {
        std::vector<double> gx, gw;
        gaussLegendre(rOrder, gx, gw);

        // Radial nodes with weight w * r (area element), per panel.
        std::vector<double> rs, rw;
        for (size_t i = 0; i + 1 < radialBreaks_.size(); ++i) {
            const double a = radialBreaks_[i], b = radialBreaks_[i + 1];
            const double half = (b - a) / 2, mid = (a + b) / 2;
            for (int j = 0; j < rOrder; ++j) {
                const double r = half * gx[j] + mid;
                rs.push_back(r);
                rw.push_back(half * gw[j] * r);
            }
        }

        std::vector<double> ts, tw;
        if (angularBreaks_.empty()) {
            const int n = std::max(4, angularCount_ / aScale);
            for (int i = 0; i < n; ++i) {
                ts.push_back((i + 0.5) * kTwoPi / n);
                tw.push_back(kTwoPi / n);
            }
        } else {
            const int order = (aScale == 1) ? 4 : 2;
            std::vector<double> ax, aw;
            gaussLegendre(order, ax, aw);
            for (size_t i = 0; i + 1 < angularBreaks_.size(); ++i) {
                const double a = angularBreaks_[i], b = angularBreaks_[i + 1];
                const double half = (b - a) / 2, mid = (a + b) / 2;
                for (int j = 0; j < order; ++j) {
                    ts.push_back(half * ax[j] + mid);
                    tw.push_back(half * aw[j]);
                }
            }
        }

        out.reserve(rs.size() * ts.size());
        const double jac = rho_ * rho_;
        for (size_t it = 0; it < ts.size(); ++it) {
            const Complex dir{std::cos(ts[it]), std::sin(ts[it])};
            for (size_t ir = 0; ir < rs.size(); ++ir) {
                out.push_back({center_ + rho_ * rs[ir] * dir, jac * rw[ir] * tw[it]});
            }
        }
    };

    emit(nodes_, radialOrder_, 1);
    emit(coarse_, std::max(1, radialOrder_ / 2), 2);
    area_ = std::numbers::pi * rho_ * rho_;
    weightTol_ = 1e-9 * std::max<double>(1.0, area_);
}

double DiskRule::totalWeight() const {
    Accum acc;
    for (const auto& n : nodes_) acc.add({n.w, 0.0});
    return acc.total().real();
}

bool DiskRule::valid() const {
    if (std::abs(totalWeight() - area_) > weightTol_) return false;
    for (const auto& n : nodes_) {
        if (n.w <= 0.0) return false;
        if (std::abs(n.z - center_) > rho_ * (1.0 + 1e-12)) return false;
    }
    return true;
}

void DiskRule::writeCsv(std::ostream& os) const {
    os << "re,im,weight\n";
    for (const auto& n : nodes_)
        os << n.z.real() << ',' << n.z.imag() << ',' << n.w << '\n';
}

IntegralResult integrateDisk(const std::function<Complex(Complex)>& f, const DiskRule& rule) {
    // Fixed-size blocks combined in index order keep the sum independent of
    // any execution partitioning (serial and threaded runs agree bitwise).
    constexpr size_t kBlock = 4096;
    auto blockSum = [&f](const std::vector<QuadratureNode>& nodes, size_t b, size_t end) {
        Accum blk;
        for (size_t i = b; i < end; ++i) {
            const Complex v = f(nodes[i].z);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw SingularSampleError(nodes[i].z,
                    "singular sample at node (" + std::to_string(nodes[i].z.real()) + ", " +
                    std::to_string(nodes[i].z.imag()) + ")");
            blk.add(nodes[i].w * v);
        }
        return blk.total();
    };

    auto fold = [&](const std::vector<QuadratureNode>& nodes) {
        const size_t nBlocks = (nodes.size() + kBlock - 1) / kBlock;
        std::vector<Complex> parts(nBlocks);
        const int threads = std::min<int>(par::maxThreads(), (int)nBlocks);
        if (threads > 1) {
            std::atomic<size_t> next{0};
            std::exception_ptr firstError;
            std::mutex errMutex;
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) {
                pool.emplace_back([&] {
                    for (size_t b = next.fetch_add(1); b < nBlocks; b = next.fetch_add(1)) {
                        const size_t lo = b * kBlock, hi = std::min(nodes.size(), lo + kBlock);
                        try {
                            parts[b] = blockSum(nodes, lo, hi);
                        } catch (...) {
                            std::lock_guard<std::mutex> g(errMutex);
                            if (!firstError) firstError = std::current_exception();
                            return;
                        }
                    }
                });
            }
            for (auto& th : pool) th.join();
            if (firstError) std::rethrow_exception(firstError);
        } else {
            for (size_t b = 0; b < nBlocks; ++b) {
                const size_t lo = b * kBlock, hi = std::min(nodes.size(), lo + kBlock);
                parts[b] = blockSum(nodes, lo, hi);
            }
        }
        // block results always combine in index order
        Accum total;
        for (const Complex& p : parts) total.add(p);
        return total.total();
    };

    const Complex fine = fold(rule.nodes());
    const Complex coarse = fold(rule.coarseNodes());
    const double err = std::abs(fine - coarse) + 64.0 * 1e-16 * std::abs(fine);
    return {fine, err};
}

}  // namespace blab::quad
