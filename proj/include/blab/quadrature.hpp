#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace blab::quad {

using Complex = std::complex<double>;

struct QuadratureNode {
    Complex z;
    double w;
};

struct RefinementHint {
    Complex point;     // |point| = 1
    double strength;
};

struct IntegralResult {
    Complex value;
    double errorEstimate;
};

/// Thrown when an integrand returns a non-finite value at a node.
class SingularSampleError : public std::runtime_error {
public:
    SingularSampleError(Complex node, const std::string& what)
        : std::runtime_error(what), node_(node) {}
    Complex node() const { return node_; }

private:
    Complex node_;
};

/// Tensor-product polar rule on the closed unit disk: Gauss-Legendre panels
/// in radius, uniform midpoints in angle (Gauss-Legendre angular panels once
/// a boundary refinement hint is present). Carries an embedded coarser rule
/// for two-level error estimation. Immutable after construction.
class DiskRule {
public:
    /// Uniformly spaced radial panels.
    static DiskRule polar(int radialPanels, int radialOrder, int angularCount);

    /// Radial panels aligned to the given breakpoints (subset of [0,1];
    /// 0 and 1 are added if missing). Keeps piecewise-radial integrands
    /// smooth on every panel.
    static DiskRule alignedTo(std::vector<double> radialBreakpoints,
                              int radialOrder, int angularCount);

    /// Geometrically graded panels (radial and angular) toward a boundary
    /// point. strength 0 returns the rule unchanged; the graded panels reach
    /// scales ~2^-ceil(10*strength). Throws std::domain_error off |p| = 1.
    DiskRule refineNear(Complex boundaryPoint, double strength) const;

    /// Same rule mapped onto the disk {|z - center| < rho}.
    DiskRule mapped(Complex center, double rho) const;

    const std::vector<QuadratureNode>& nodes() const { return nodes_; }
    const std::vector<QuadratureNode>& coarseNodes() const { return coarse_; }
    const std::vector<RefinementHint>& hints() const { return hints_; }

    double totalWeight() const;
    double weightTolerance() const { return weightTol_; }
    int declaredOrder() const { return 2; }
    double area() const { return area_; }  // measure of the underlying disk

    bool valid() const;

    // CSV columns: re, im, weight
    void writeCsv(std::ostream& os) const;

private:
    DiskRule() = default;
    void build();

    std::vector<double> radialBreaks_;
    int radialOrder_ = 4;
    int angularCount_ = 64;
    std::vector<double> angularBreaks_;  // empty => uniform midpoints
    std::vector<RefinementHint> hints_;
    Complex center_{0.0, 0.0};
    double rho_ = 1.0;
    double area_ = 0.0;
    double weightTol_ = 1e-9;
    std::vector<QuadratureNode> nodes_, coarse_;
};

/// \iint f dxdy over the rule's disk. Deterministic pairwise-compensated
/// summation; the error estimate compares against the embedded coarse rule.
IntegralResult integrateDisk(const std::function<Complex(Complex)>& f, const DiskRule& rule);

/// Gauss-Legendre nodes/weights on [-1,1].
void gaussLegendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace blab::quad
