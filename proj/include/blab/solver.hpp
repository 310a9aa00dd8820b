#pragma once

#include "blab/beltrami.hpp"

#include <complex>
#include <iosfwd>
#include <vector>

namespace blab::qc {

using field::BeltramiField;
using field::Complex;
using field::SupportMask;

struct GridSpec {
    int n = 512;     // cells per side, power of two
    double L = 2.0;  // grid square [-L, L]^2
};

/// Complex samples at the cell centers of [-L,L]^2, row-major.
class GridField {
public:
    GridField(GridSpec spec, Complex fill = {0.0, 0.0});
    static GridField sample(const std::function<Complex(Complex)>& f, GridSpec spec);

    const GridSpec& spec() const { return spec_; }
    double spacing() const { return 2.0 * spec_.L / spec_.n; }
    Complex point(int i, int j) const {
        const double h = spacing();
        return {-spec_.L + (i + 0.5) * h, -spec_.L + (j + 0.5) * h};
    }
    size_t index(int i, int j) const { return (size_t)j * spec_.n + i; }
    Complex at(int i, int j) const { return v_[index(i, j)]; }
    Complex& at(int i, int j) { return v_[index(i, j)]; }
    const std::vector<Complex>& data() const { return v_; }
    std::vector<Complex>& data() { return v_; }

    double l2Norm() const;  // sqrt(sum |v|^2 dA)

private:
    GridSpec spec_;
    std::vector<Complex> v_;
};

/// Cauchy transform (Th)(z) = (1/pi) \iint h(w)/(z-w) dA(w): zero-padded FFT
/// convolution with the 1/(pi w) kernel, so d/dzbar (Th) = h at interior
/// cells up to grid resolution. Requires a power-of-two grid.
GridField cauchyTransform(const GridField& h);

/// Beurling transform S = d/dz of the Cauchy transform, applied as the
/// unit-modulus spectral multiplier conj(xi)/xi on the padded grid.
GridField beurlingTransform(const GridField& h);

struct MapData {
    GridSpec spec;
    GridField f, fz, fzbar;
    double residual;      // ||fzbar - mu fz|| / ||fz|| over unit-disk cells
    int iterations;
    std::vector<double> increments;  // grid-L2 Neumann update sizes
    Complex mapAt(Complex z) const;  // bilinear interpolation of f
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double lastResidual)
        : std::runtime_error(what), lastResidual_(lastResidual) {}
    double lastResidual() const { return lastResidual_; }

private:
    double lastResidual_;
};

/// Neumann iteration h <- mu S h + mu for f_zbar = mu f_z, with
/// f = z + Th, f_z = 1 + Sh, f_zbar = h (plane normalization: f - z decays
/// at the grid boundary; disk self-maps differ by a conformal factor that
/// no verified quantity depends on). cutoffAtDisk extends mu by zero off
/// the unit disk; pass false to keep mu on the whole square.
MapData solveBeltrami(const BeltramiField& mu, GridSpec spec, double tol = 1e-3,
                      int maxIter = 60, bool cutoffAtDisk = true);

/// alpha = -mu fz / conj(fz), stored in polar pieces so |alpha| carries the
/// sampled |mu| verbatim.
struct InverseDilatation {
    GridSpec spec;
    std::vector<double> modulus;  // == |mu| at the cell, by construction
    std::vector<Complex> phase;   // unit factors
    Complex value(size_t idx) const { return modulus[idx] * phase[idx]; }
};

InverseDilatation inverseDilatation(const BeltramiField& mu, const MapData& map,
                                    bool cutoffAtDisk = true);

struct PointCloud {
    std::vector<Complex> source;
    std::vector<Complex> image;
};

/// Images of stratified samples of the mask region under the solved map.
PointCloud imageOfSet(const MapData& map, const SupportMask& mask, int samples,
                      unsigned long long seed = 1);

/// Raster covering estimate: number of cellSize-cells hit times cell area.
/// Evidence-level statistic only.
double coveringAreaEstimate(const std::vector<Complex>& pts, double cellSize);

// 16-byte header (int64 n, float64 L), then row-major re/im float64 pairs.
void writeGridBinary(const GridField& g, std::ostream& os);
GridField readGridBinary(std::istream& is);

}  // namespace blab::qc
