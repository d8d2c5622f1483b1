#ifndef FANOCOH_VISIBILITY_HPP
#define FANOCOH_VISIBILITY_HPP

#include <optional>
#include <span>
#include <vector>

#include "fanocoh/model.hpp"

namespace fanocoh
{

// Closed detuning interval used to search for intensity extrema.
struct Window
{
    double lo = -50.0;
    double hi = 50.0;
};

struct VisibilityResult
{
    double v = 0.0;
    double i_max = 0.0;
    double i_min = 0.0;
    std::optional<double> eps_max;  // empty when the supremum is the asymptotic level
    std::optional<double> eps_min;  // empty when the infimum is the asymptotic level
    bool min_at_infinity = false;
    Window window;
};

// (i_max - i_min) / (i_max + i_min). Empty when both are zero.
// Throws std::invalid_argument when i_max < i_min or either is negative.
std::optional<double> visibility(double i_max, double i_min);

// chi = 2 sqrt(I_A I_B) / (I_A + I_B). Throws when both intensities are zero.
double balance_factor(const ChannelIntensities& ci);

// V = chi g for a two-arm interferometer with phase-independent arm intensities.
std::optional<double> mzi_visibility(const ChannelIntensities& ci, double g);

// Extrema over the window from the analytic stationary points and the window
// edges. With include_asymptote the eps -> +-inf level is a candidate as well.
VisibilityResult fano_visibility(const FanoParams& p, Window window = {},
                                 bool include_asymptote = true);

struct VisibilityPoint
{
    double g;
    double v;
};

std::vector<VisibilityPoint> visibility_vs_coherence_curve(double q, std::span<const double> g_grid,
                                                           Window window = {});

}  // namespace fanocoh

#endif  // FANOCOH_VISIBILITY_HPP
