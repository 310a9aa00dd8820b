#pragma once

#include "blab/quadrature.hpp"

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace blab::field {

using Complex = std::complex<double>;

enum class EvalPolicy { Auto, Quadrature, Analytic };

class InfiniteNormError : public std::runtime_error {
public:
    explicit InfiniteNormError(const std::string& what) : std::runtime_error(what) {}
};

/// Holomorphic integrand on the disk. Three shapes cover the battery:
/// polynomials, Mobius-type concentrating kernels
/// (1-x^2)^a / ((1-xz)^b (1-z)^c), and the non-integrable 1/(1-z)^2.
class QuadraticDifferential {
public:
    struct Polynomial {
        std::vector<Complex> coeffs;  // c0 + c1 z + ...
    };
    struct Kernel {
        double x;        // in [0,1)
        double a, b, c;  // exponents; integrable iff c < 2
    };
    struct BoundarySingular {};  // 1/(1-z)^2
    struct LocalMonomial {       // ((z - center)/scale)^n, conditioned for subdisk work
        Complex center;
        double scale;
        int n;
    };

    using Form = std::variant<Polynomial, Kernel, BoundarySingular, LocalMonomial>;

    static QuadraticDifferential polynomial(std::vector<Complex> coeffs);
    static QuadraticDifferential monomial(int n, Complex coeff = 1.0);
    static QuadraticDifferential kernel(double x, double a, double b, double c);
    static QuadraticDifferential boundarySingular();
    static QuadraticDifferential localMonomial(Complex center, double scale, int n);

    Complex value(Complex z) const;
    bool integrable() const;
    bool isZero() const;

    /// Closed-form L1 norm where one exists:
    ///   z^n                      -> 2 pi / (n+2)
    ///   (1-x^2)^a (1-z)^-c       -> pi (1-x^2)^a Gamma(2-c)/Gamma(2-c/2)^2
    ///   (1-x^2)^a (1-xz)^-b      -> pi (1-x^2)^a 2F1(b/2, b/2; 2; x^2)
    std::optional<double> analyticL1() const;

    const Form& form() const { return form_; }
    const std::string& id() const { return id_; }

private:
    QuadraticDifferential(Form f, std::string id) : form_(std::move(f)), id_(std::move(id)) {}
    Form form_;
    std::string id_;
};

struct NormResult {
    double value;
    double error;
    bool analytic;
};

/// \iint |phi| dxdy. Throws InfiniteNormError for non-integrable forms.
NormResult l1Norm(const QuadraticDifferential& phi, const quad::DiskRule& rule,
                  EvalPolicy policy = EvalPolicy::Auto);

}  // namespace blab::field
