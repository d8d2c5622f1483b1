#include "fanocoh/asymmetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace fanocoh
{

std::string to_string(InversionMethod m)
{
    switch (m)
    {
        case InversionMethod::analytic:
            return "analytic";
        case InversionMethod::cubic_numeric:
            return "cubic-numeric";
        case InversionMethod::closed_form_cardano:
            return "closed-form-cardano";
    }
    return "unknown";
}

double asymmetry(Detuning eps, const FanoParams& p)
{
    const double e = std::abs(eps.epsilon);
    const double q = p.q();
    const double g = p.g();
    const double den = 2.0 * (1.0 - g) + e * e + q * q;
    if (den == 0.0)
        return 0.0;
    return 2.0 * std::abs(q) * e * g / den;
}

std::optional<double> asymmetry_of(const std::function<double(double)>& intensity, double eps)
{
    const double plus = intensity(eps);
    const double minus = intensity(-eps);
    const double sum = plus + minus;
    if (!(sum > 0.0))
        return std::nullopt;
    return std::abs(plus - minus) / sum;
}

AsymmetryPeak asymmetry_peak(const FanoParams& p)
{
    const double q = p.q();
    const double g = p.g();
    AsymmetryPeak peak;
    peak.eps0 = std::sqrt(2.0 * (1.0 - g) + q * q);
    if (q == 0.0 || g == 0.0)
    {
        peak.degenerate = true;
        return peak;
    }
    peak.a_max = std::abs(q) * g / peak.eps0;
    return peak;
}

double coherence_lower_bound(const AsymmetryPeak& peak)
{
    return peak.degenerate ? 0.0 : peak.a_max;
}

std::optional<double> coherence_closed_form(double eps0, double a_max)
{
    const double x = eps0 * eps0;
    const double a2 = a_max * a_max;
    const double shift = x - 2.0;
    const double shift3 = shift * shift * shift;
    const double radicand = 27.0 * a2 * a2 * x * x - a2 * x * shift3;
    if (radicand < 0.0)
        return std::nullopt;
    const double r = std::cbrt(54.0 * a2 * x - shift3 + 6.0 * std::sqrt(3.0) * std::sqrt(radicand));
    if (r == 0.0)
        return std::nullopt;
    return (2.0 - x + shift * shift / r + r) / 6.0;
}

CoherenceEstimate coherence_exact(const AsymmetryPeak& peak)
{
    constexpr double slack = 1e-12;
    if (peak.degenerate)
        return {};  // every g with q = 0 fits; nothing to invert
    if (!std::isfinite(peak.eps0) || !std::isfinite(peak.a_max) || !(peak.eps0 > 0.0))
        throw InconsistentPeak("asymmetry peak position must be positive and finite");
    if (peak.a_max < -slack || peak.a_max > 1.0 + slack)
        throw InconsistentPeak("asymmetry peak height outside [0, 1]");

    CoherenceEstimate est;
    const double a = std::clamp(peak.a_max, 0.0, 1.0);
    est.lower_bound = a;
    if (a == 0.0)
        return est;

    const double x = peak.eps0 * peak.eps0;
    auto cubic = [&](double g) { return 2.0 * g * g * g + (x - 2.0) * g * g - a * a * x; };

    est.closed_form = coherence_closed_form(peak.eps0, a);

    if (a == 1.0)
    {
        est.exact = 1.0;
        est.method = InversionMethod::analytic;
        est.residual = cubic(1.0);
        return est;
    }

    // Below max(a, 1 - x/2) the implied q^2 is negative and the cubic has no
    // admissible root; above it the cubic is increasing with cubic(1) >= 0.
    const double lo = std::max(a, 1.0 - 0.5 * x);
    const double hi = 1.0;
    const double f_lo = cubic(lo);
    const double f_hi = cubic(hi);
    double root;
    if (f_lo == 0.0)
        root = lo;
    else if (f_hi == 0.0)
        root = hi;
    else
    {
        if (f_lo > 0.0 || f_hi < 0.0)
            throw InconsistentPeak("elimination cubic has no root in [a_max, 1]");
        std::uintmax_t iters = 200;
        const auto bracket = boost::math::tools::toms748_solve(
            cubic, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), iters);
        root = 0.5 * (bracket.first + bracket.second);
    }

    est.exact = root;
    est.method = InversionMethod::cubic_numeric;
    est.residual = cubic(root);
    return est;
}

MimicryMap mimicry_map(double q, double g)
{
    if (!std::isfinite(q))
        throw std::invalid_argument("mimicry_map: q must be finite");
    if (!(g >= 0.0 && g <= 1.0))
        throw std::invalid_argument("mimicry_map: g must lie in [0, 1]");

    // Adding beta turns the numerator into B eps^2 + 2 q g eps + (q^2 + 1 - 2g + B)
    // with B = 1 + beta (1 + q^2). It is a perfect square B (eps + q g / B)^2 iff
    //   B^2 + p B - q^2 g^2 = 0,  p = q^2 + 1 - 2g.
    const double p = q * q + 1.0 - 2.0 * g;
    const double qg = q * g;
    double b;
    if (qg == 0.0)
    {
        if (p == 0.0)
            throw std::domain_error("mimicry_map: flat spectrum (q = 0, g = 1/2) has no coherent image");
        b = -p;  // the root B = 0 leaves a constant numerator
    }
    else
    {
        const double disc = std::sqrt(p * p + 4.0 * qg * qg);
        b = p > 0.0 ? 2.0 * qg * qg / (p + disc) : 0.5 * (disc - p);
    }

    MimicryMap m;
    m.q_prime = qg / b;
    m.beta = (b - 1.0) / (1.0 + q * q);
    m.alpha = (1.0 + q * q) / (b + qg * qg / b);
    return m;
}

}  // namespace fanocoh
