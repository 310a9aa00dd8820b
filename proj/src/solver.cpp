#include "blab/solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

namespace blab::qc {

namespace {

constexpr double kPi = std::numbers::pi;

bool isPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

void checkSpec(const GridSpec& spec) {
    if (!isPowerOfTwo(spec.n))
        throw std::invalid_argument("grid resolution must be a power of two");
    if (spec.L < 1.0)
        throw std::invalid_argument("grid half-width L must be >= 1");
}

void fft2dInPlace(std::vector<Complex>& buf, int m, int sign) {
    fftw_plan plan = fftw_plan_dft_2d(m, m, reinterpret_cast<fftw_complex*>(buf.data()),
                                      reinterpret_cast<fftw_complex*>(buf.data()), sign,
                                      FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

// FFT of the sampled 1/(pi w) kernel on the padded grid, cached per (n, L).
const std::vector<Complex>& cauchyKernelHat(const GridSpec& spec) {
    static std::map<std::pair<int, double>, std::vector<Complex>> cache;
    auto key = std::make_pair(spec.n, spec.L);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const int m = 2 * spec.n;
    const double h = 2.0 * spec.L / spec.n;
    std::vector<Complex> k((size_t)m * m, Complex(0));
    for (int j = 0; j < m; ++j) {
        const int oj = j < m / 2 ? j : j - m;
        for (int i = 0; i < m; ++i) {
            const int oi = i < m / 2 ? i : i - m;
            if (oi == 0 && oj == 0) continue;  // principal value at the origin cell
            const Complex w(oi * h, oj * h);
            k[(size_t)j * m + i] = 1.0 / (kPi * w);
        }
    }
    fft2dInPlace(k, m, FFTW_FORWARD);
    return cache.emplace(key, std::move(k)).first->second;
}

std::vector<Complex> padded(const GridField& g) {
    const int n = g.spec().n, m = 2 * n;
    std::vector<Complex> out((size_t)m * m, Complex(0));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out[(size_t)j * m + i] = g.at(i, j);
    return out;
}

GridField cropped(const std::vector<Complex>& buf, const GridSpec& spec) {
    const int n = spec.n, m = 2 * n;
    GridField out(spec);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out.at(i, j) = buf[(size_t)j * m + i];
    return out;
}

}  // namespace

GridField::GridField(GridSpec spec, Complex fill) : spec_(spec) {
    checkSpec(spec);
    v_.assign((size_t)spec.n * spec.n, fill);
}

GridField GridField::sample(const std::function<Complex(Complex)>& f, GridSpec spec) {
    GridField g(spec);
    for (int j = 0; j < spec.n; ++j)
        for (int i = 0; i < spec.n; ++i) g.at(i, j) = f(g.point(i, j));
    return g;
}

double GridField::l2Norm() const {
    double s = 0.0;
    for (const auto& v : v_) s += std::norm(v);
    const double h = spacing();
    return std::sqrt(s * h * h);
}

GridField cauchyTransform(const GridField& g) {
    checkSpec(g.spec());
    const int m = 2 * g.spec().n;
    const double h = g.spacing();
    auto buf = padded(g);
    fft2dInPlace(buf, m, FFTW_FORWARD);
    const auto& khat = cauchyKernelHat(g.spec());
    const double scale = h * h / ((double)m * m);  // cell area and FFT normalization
    for (size_t i = 0; i < buf.size(); ++i) buf[i] *= khat[i] * scale;
    fft2dInPlace(buf, m, FFTW_BACKWARD);
    return cropped(buf, g.spec());
}

GridField beurlingTransform(const GridField& g) {
    checkSpec(g.spec());
    const int m = 2 * g.spec().n;
    auto buf = padded(g);
    fft2dInPlace(buf, m, FFTW_FORWARD);
    for (int j = 0; j < m; ++j) {
        const int kj = j < m / 2 ? j : j - m;
        for (int i = 0; i < m; ++i) {
            const int ki = i < m / 2 ? i : i - m;
            Complex mult(0.0, 0.0);
            if (ki != 0 || kj != 0) {
                const Complex xi((double)ki, (double)kj);
                mult = std::conj(xi) / xi;
            }
            buf[(size_t)j * m + i] *= mult / ((double)m * m);
        }
    }
    fft2dInPlace(buf, m, FFTW_BACKWARD);
    return cropped(buf, g.spec());
}

Complex MapData::mapAt(Complex z) const {
    const int n = spec.n;
    const double h = 2.0 * spec.L / n;
    const double x = (z.real() + spec.L) / h - 0.5;
    const double y = (z.imag() + spec.L) / h - 0.5;
    const int i0 = std::clamp((int)std::floor(x), 0, n - 2);
    const int j0 = std::clamp((int)std::floor(y), 0, n - 2);
    const double tx = std::clamp(x - i0, 0.0, 1.0);
    const double ty = std::clamp(y - j0, 0.0, 1.0);
    const Complex v00 = f.at(i0, j0), v10 = f.at(i0 + 1, j0);
    const Complex v01 = f.at(i0, j0 + 1), v11 = f.at(i0 + 1, j0 + 1);
    return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 + tx * ty * v11;
}

MapData solveBeltrami(const BeltramiField& mu, GridSpec spec, double tol, int maxIter,
                      bool cutoffAtDisk) {
    checkSpec(spec);
    if (mu.essSup() >= 1.0)
        throw std::domain_error("solveBeltrami needs ||mu||_inf < 1");

    GridField muGrid = GridField::sample(
        [&](Complex z) -> Complex {
            if (cutoffAtDisk && std::abs(z) >= 1.0) return {0.0, 0.0};
            return mu.value(z);
        },
        spec);

    const int n = spec.n;
    const double h = muGrid.spacing();

    auto diskL2 = [&](const GridField& g) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (std::abs(g.point(i, j)) < 1.0) s += std::norm(g.at(i, j));
        return std::sqrt(s * h * h);
    };

    MapData out{spec, GridField(spec), GridField(spec), GridField(spec), 0.0, 0, {}};

    double muNorm = 0.0;
    for (const auto& v : muGrid.data()) muNorm = std::max(muNorm, std::abs(v));
    if (muNorm == 0.0) {
        out.f = GridField::sample([](Complex z) { return z; }, spec);
        out.fz = GridField(spec, Complex(1.0, 0.0));
        out.fzbar = GridField(spec, Complex(0.0, 0.0));
        out.residual = 0.0;
        out.iterations = 0;
        return out;
    }

    GridField hField(spec);
    GridField sh(spec);
    double lastInc = -1.0;
    bool converged = false;
    for (int it = 1; it <= maxIter; ++it) {
        sh = beurlingTransform(hField);
        GridField next(spec);
        double inc2 = 0.0, fzNorm2 = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const Complex m = muGrid.at(i, j);
                const Complex nv = m * sh.at(i, j) + m;
                inc2 += std::norm(nv - hField.at(i, j));
                if (std::abs(hField.point(i, j)) < 1.0)
                    fzNorm2 += std::norm(1.0 + sh.at(i, j));
                next.at(i, j) = nv;
            }
        }
        const double inc = std::sqrt(inc2 * h * h);
        const double fzNorm = std::sqrt(fzNorm2 * h * h);
        out.increments.push_back(inc);
        hField = std::move(next);
        out.iterations = it;
        lastInc = inc;
        if (inc <= tol * std::max(fzNorm, 1e-30)) {
            converged = true;
            break;
        }
    }

    sh = beurlingTransform(hField);
    out.fzbar = hField;
    out.fz = GridField(spec);
    GridField resField(spec);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            out.fz.at(i, j) = 1.0 + sh.at(i, j);
            resField.at(i, j) = hField.at(i, j) - muGrid.at(i, j) * out.fz.at(i, j);
        }
    }
    const double fzDisk = diskL2(out.fz);
    out.residual = fzDisk > 0 ? diskL2(resField) / fzDisk : 0.0;

    if (!converged && out.residual > tol)
        throw SolverError("Beltrami iteration did not reach tolerance; last increment " +
                              std::to_string(lastInc) + ", residual " +
                              std::to_string(out.residual),
                          out.residual);

    GridField th = cauchyTransform(hField);
    out.f = GridField(spec);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out.f.at(i, j) = out.f.point(i, j) + th.at(i, j);
    return out;
}

InverseDilatation inverseDilatation(const BeltramiField& mu, const MapData& map,
                                    bool cutoffAtDisk) {
    const int n = map.spec.n;
    InverseDilatation out;
    out.spec = map.spec;
    out.modulus.resize((size_t)n * n);
    out.phase.resize((size_t)n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const size_t idx = map.f.index(i, j);
            const Complex z = map.f.point(i, j);
            const Complex m = (cutoffAtDisk && std::abs(z) >= 1.0) ? Complex(0) : mu.value(z);
            const Complex fz = map.fz.at(i, j);
            if (std::abs(fz) == 0.0)
                throw std::runtime_error("singular derivative: fz vanishes at a cell");
            const Complex ratio = fz / std::conj(fz);
            const Complex unit = ratio / std::abs(ratio);
            out.modulus[idx] = std::abs(m);
            out.phase[idx] = -field::sgn(m) * unit;
        }
    }
    return out;
}

PointCloud imageOfSet(const MapData& map, const SupportMask& mask, int samples,
                      unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int side = std::max(2, (int)std::ceil(std::sqrt((double)samples)));
    const Complex c = mask.boundCenter();
    const double R = mask.boundRadius();
    PointCloud cloud;
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            const double u = (i + unif(rng)) / side;
            const double v = (j + unif(rng)) / side;
            const Complex z = c + Complex(R * (2 * u - 1), R * (2 * v - 1));
            if (std::abs(z - c) >= R || std::abs(z) >= 1.0) continue;
            if (!mask.contains(z)) continue;
            cloud.source.push_back(z);
            cloud.image.push_back(map.mapAt(z));
        }
    }
    return cloud;
}

double coveringAreaEstimate(const std::vector<Complex>& pts, double cellSize) {
    if (cellSize <= 0.0) throw std::invalid_argument("cell size must be positive");
    std::map<std::pair<long long, long long>, bool> cells;
    for (const auto& p : pts)
        cells[{(long long)std::floor(p.real() / cellSize),
               (long long)std::floor(p.imag() / cellSize)}] = true;
    return (double)cells.size() * cellSize * cellSize;
}

void writeGridBinary(const GridField& g, std::ostream& os) {
    const int64_t n = g.spec().n;
    const double L = g.spec().L;
    os.write(reinterpret_cast<const char*>(&n), 8);
    os.write(reinterpret_cast<const char*>(&L), 8);
    for (const auto& v : g.data()) {
        const double re = v.real(), im = v.imag();
        os.write(reinterpret_cast<const char*>(&re), 8);
        os.write(reinterpret_cast<const char*>(&im), 8);
    }
}

GridField readGridBinary(std::istream& is) {
    int64_t n = 0;
    double L = 0;
    is.read(reinterpret_cast<char*>(&n), 8);
    is.read(reinterpret_cast<char*>(&L), 8);
    GridField g({(int)n, L});
    for (auto& v : g.data()) {
        double re, im;
        is.read(reinterpret_cast<char*>(&re), 8);
        is.read(reinterpret_cast<char*>(&im), 8);
        v = {re, im};
    }
    if (!is) throw std::runtime_error("truncated grid binary");
    return g;
}

}  // namespace blab::qc
