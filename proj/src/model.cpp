#include "fanocoh/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fanocoh
{

namespace
{

void require_finite(double x, const char* what)
{
    if (!std::isfinite(x))
        throw std::invalid_argument(std::string(what) + " must be finite");
}

void require_coherence(double g)
{
    if (!(g >= 0.0 && g <= 1.0))
        throw std::invalid_argument("coherence g must lie in [0, 1], got " + std::to_string(g));
}

double wrap_phase(double phi)
{
    phi = std::remainder(phi, 2.0 * std::numbers::pi);
    if (phi <= -std::numbers::pi)
        phi += 2.0 * std::numbers::pi;
    return phi;
}

}  // namespace

Detuning::Detuning(double eps) : epsilon(eps)
{
    require_finite(eps, "detuning");
}

Detuning Detuning::from_energy(double energy, double resonance, double linewidth)
{
    require_finite(energy, "energy");
    require_finite(resonance, "resonance energy");
    if (!(linewidth > 0.0) || !std::isfinite(linewidth))
        throw std::invalid_argument("linewidth must be positive and finite");
    return Detuning((energy - resonance) / (2.0 * linewidth));
}

FanoParams::FanoParams(double q, double g) : q_(q), g_(g)
{
    require_finite(q, "Fano parameter q");
    require_coherence(g);
}

ChannelIntensities::ChannelIntensities(double a, double b) : a_(a), b_(b)
{
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("channel intensities must be finite and nonnegative");
}

ChannelAmplitudes channel_amplitudes(Detuning eps, double q)
{
    require_finite(q, "Fano parameter q");
    using C = std::complex<double>;
    return {1.0 / C(q, -1.0), 1.0 / C(eps.epsilon, 1.0)};
}

double relative_phase(Detuning eps, double q)
{
    require_finite(q, "Fano parameter q");
    // arg(e_resonant) - arg(e_continuum); both arguments are exact atan2 forms
    // of (eps - i) and (q + i), which keeps eps = -q at exactly +-pi.
    return wrap_phase(std::atan2(-1.0, eps.epsilon) - std::atan2(1.0, q));
}

double fano_intensity(Detuning eps, const FanoParams& p)
{
    const double e = eps.epsilon;
    const double q = p.q();
    const double g = p.g();
    const double num = e * e + q * q + 2.0 * q * e * g + 2.0 * (1.0 - g);
    return std::max(0.0, num / ((1.0 + e * e) * (1.0 + q * q)));
}

double fano_intensity_ideal(Detuning eps, double q)
{
    require_finite(q, "Fano parameter q");
    const double e = eps.epsilon;
    return (e + q) * (e + q) / ((1.0 + e * e) * (1.0 + q * q));
}

double mzi_intensity(double phi, const ChannelIntensities& ci, double g)
{
    require_finite(phi, "phase");
    require_coherence(g);
    return ci.a() + ci.b() + 2.0 * g * std::sqrt(ci.a() * ci.b()) * std::cos(phi);
}

StationaryPoints fano_stationary_points(const FanoParams& p)
{
    const double q = p.q();
    const double g = p.g();

    StationaryPoints out;
    out.asymptote = 1.0 / (1.0 + q * q);

    // dI/deps is proportional to P(eps) = a eps^2 + b eps + c.
    const double a = -q * g;
    const double b = 2.0 * g - 1.0 - q * q;
    const double c = q * g;

    auto classify = [&](double root) {
        // P goes from + to - through a maximum.
        const double slope = 2.0 * a * root + b;
        return StationaryPoint{root, fano_intensity(Detuning(root), p),
                               slope < 0.0 ? ExtremumKind::maximum : ExtremumKind::minimum};
    };

    if (a == 0.0)
    {
        out.degenerate = true;
        if (b == 0.0)
        {
            out.flat = true;
            return out;
        }
        out.points.push_back(classify(0.0));
        return out;
    }

    // a * c = -q^2 g^2 < 0, so the discriminant is positive and the roots are real.
    const double disc = b * b - 4.0 * a * c;
    const double t = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double r1 = t / a;
    double r2 = c / t;
    if (r1 > r2)
        std::swap(r1, r2);
    out.points.push_back(classify(r1));
    out.points.push_back(classify(r2));
    return out;
}

}  // namespace fanocoh
