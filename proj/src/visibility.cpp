#include "fanocoh/visibility.hpp"

#include <cmath>
#include <stdexcept>

namespace fanocoh
{

std::optional<double> visibility(double i_max, double i_min)
{
    if (!std::isfinite(i_max) || !std::isfinite(i_min))
        throw std::invalid_argument("visibility: intensities must be finite");
    if (i_min < 0.0)
        throw std::invalid_argument("visibility: negative intensity");
    if (i_max < i_min)
        throw std::invalid_argument("visibility: i_max < i_min");
    const double sum = i_max + i_min;
    if (sum == 0.0)
        return std::nullopt;
    return (i_max - i_min) / sum;
}

double balance_factor(const ChannelIntensities& ci)
{
    const double sum = ci.a() + ci.b();
    if (sum == 0.0)
        throw std::invalid_argument("balance factor undefined for two dark arms");
    return 2.0 * std::sqrt(ci.a() * ci.b()) / sum;
}

std::optional<double> mzi_visibility(const ChannelIntensities& ci, double g)
{
    if (!(g >= 0.0 && g <= 1.0))
        throw std::invalid_argument("coherence g must lie in [0, 1]");
    if (ci.a() + ci.b() == 0.0)
        return std::nullopt;
    return balance_factor(ci) * g;
}

VisibilityResult fano_visibility(const FanoParams& p, Window window, bool include_asymptote)
{
    if (!(window.lo < window.hi) || !std::isfinite(window.lo) || !std::isfinite(window.hi))
        throw std::invalid_argument("fano_visibility: empty or non-finite window");

    VisibilityResult r;
    r.window = window;

    auto consider = [&](double value, std::optional<double> eps) {
        if (value > r.i_max)
        {
            r.i_max = value;
            r.eps_max = eps;
        }
        if (value < r.i_min)
        {
            r.i_min = value;
            r.eps_min = eps;
        }
    };

    const double lo_value = fano_intensity(Detuning(window.lo), p);
    r.i_max = r.i_min = lo_value;
    r.eps_max = r.eps_min = window.lo;
    consider(fano_intensity(Detuning(window.hi), p), window.hi);

    const StationaryPoints sp = fano_stationary_points(p);
    for (const auto& pt : sp.points)
        if (pt.epsilon >= window.lo && pt.epsilon <= window.hi)
            consider(pt.intensity, pt.epsilon);

    if (include_asymptote)
        consider(sp.asymptote, std::nullopt);
    r.min_at_infinity = !r.eps_min.has_value();

    // Fano intensities are bounded below by a positive asymptote, so the sum never vanishes.
    r.v = visibility(r.i_max, r.i_min).value_or(0.0);
    return r;
}

std::vector<VisibilityPoint> visibility_vs_coherence_curve(double q, std::span<const double> g_grid,
                                                           Window window)
{
    std::vector<VisibilityPoint> out;
    out.reserve(g_grid.size());
    for (double g : g_grid)
        out.push_back({g, fano_visibility(FanoParams(q, g), window).v});
    return out;
}

}  // namespace fanocoh
