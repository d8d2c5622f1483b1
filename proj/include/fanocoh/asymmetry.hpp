#ifndef FANOCOH_ASYMMETRY_HPP
#define FANOCOH_ASYMMETRY_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "fanocoh/model.hpp"

namespace fanocoh
{

// Position and height of the maximum of the asymmetry parameter A(eps), eps >= 0.
struct AsymmetryPeak
{
    double eps0 = 0.0;
    double a_max = 0.0;
    bool degenerate = false;  // A vanishes identically (q = 0 or g = 0)
};

enum class InversionMethod
{
    analytic,             // boundary case a_max = 1, g = 1 without a solve
    cubic_numeric,        // bracketed root of the elimination cubic
    closed_form_cardano,  // radical expression, only where it is real
};

std::string to_string(InversionMethod m);

struct CoherenceEstimate
{
    double lower_bound = 0.0;
    std::optional<double> exact;
    InversionMethod method = InversionMethod::cubic_numeric;
    double residual = 0.0;               // cubic evaluated at the returned root
    std::optional<double> closed_form;   // Cardano value, when its radicand is >= 0
    std::optional<double> lower_bound_sigma;
    std::optional<double> exact_sigma;
};

// Baseline-and-scale map taking a partially coherent spectrum onto a fully
// coherent one: alpha * (beta + I(eps; q, g)) == I(eps; q_prime, 1).
struct MimicryMap
{
    double alpha = 1.0;
    double beta = 0.0;
    double q_prime = 0.0;
};

// Peak data that no Fano spectrum can produce.
class InconsistentPeak : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// A(eps) = 2 |q| eps g / (2 (1 - g) + eps^2 + q^2). Even in eps.
double asymmetry(Detuning eps, const FanoParams& p);

// |I(eps) - I(-eps)| / (I(eps) + I(-eps)). Empty when the denominator vanishes.
std::optional<double> asymmetry_of(const std::function<double(double)>& intensity, double eps);

// eps0 = sqrt(2 (1 - g) + q^2), a_max = |q| g / eps0.
AsymmetryPeak asymmetry_peak(const FanoParams& p);

// a_max <= g holds for every exact Fano spectrum, so the peak height bounds g from below.
double coherence_lower_bound(const AsymmetryPeak& peak);

// Coherence from the peak position and height: the unique root in [a_max, 1] of
//   2 g^3 + (eps0^2 - 2) g^2 - a_max^2 eps0^2 = 0.
// Throws InconsistentPeak when eps0 <= 0 or a_max lies outside [0, 1].
CoherenceEstimate coherence_exact(const AsymmetryPeak& peak);

// Radical form of the same root. Empty when the inner square root is imaginary.
std::optional<double> coherence_closed_form(double eps0, double a_max);

// Throws std::domain_error for (q = 0, g = 1/2): a flat spectrum has no coherent image.
MimicryMap mimicry_map(double q, double g);

}  // namespace fanocoh

#endif  // FANOCOH_ASYMMETRY_HPP
