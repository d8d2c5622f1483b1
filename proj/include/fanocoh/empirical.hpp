#ifndef FANOCOH_EMPIRICAL_HPP
#define FANOCOH_EMPIRICAL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fanocoh/asymmetry.hpp"
#include "fanocoh/spectrum.hpp"

namespace fanocoh
{

// Asymmetry of a sampled spectrum on its nonnegative detunings. The mirrored
// intensity I(-eps) is read from the sample when -eps is a grid node and from
// a monotone piecewise-cubic interpolant otherwise.
struct AsymmetryCurve
{
    std::vector<double> epsilon;     // eps >= 0, increasing
    std::vector<double> value;       // A = |difference| / sum
    std::vector<double> difference;  // I(eps) - I(-eps)
    std::vector<double> sum;         // I(eps) + I(-eps)
    std::size_t dropped = 0;         // points whose sum fell below the floor
    std::size_t interpolated = 0;    // points whose mirror needed interpolation
    double interpolation_spread = 0.0;  // max |cubic - linear| over interpolated mirrors
    double eps_limit = 0.0;
};

// Points with I(eps) + I(-eps) below sum_floor_rel * max(I) are dropped.
inline constexpr double default_sum_floor_rel = 1e-9;

// Throws std::invalid_argument without symmetric coverage around eps = 0.
AsymmetryCurve empirical_asymmetry(const Spectrum& s, double sum_floor_rel = default_sum_floor_rel);

struct RefinedPeak
{
    AsymmetryPeak peak;
    std::size_t index = 0;     // discrete argmax
    double raw_eps = 0.0;
    double raw_value = 0.0;
    double curvature = 0.0;    // second derivative of the local quadratic, in log(eps)
    bool at_boundary = false;  // argmax on the first or last point: peak may lie outside
};

// Discrete argmax refined by the quadratic through it and its two neighbours,
// taken in log(eps) where the Fano asymmetry peak is symmetric.
// Throws std::invalid_argument for fewer than 3 points.
RefinedPeak find_asymmetry_peak(std::span<const double> epsilon, std::span<const double> value);
RefinedPeak find_asymmetry_peak(const AsymmetryCurve& curve);

// Least-squares fit of the Fano asymmetry lineshape
//   difference = a * 2 eps eps0 / (eps^2 + eps0^2) * sum
// over the whole curve. The shape holds for any scale, baseline and detuning
// unit, and uses every point instead of the three around the argmax.
struct LineshapeFit
{
    double eps0 = 0.0;
    double amplitude = 0.0;  // signed a; |a| is the peak height
    double rss = 0.0;
    bool at_boundary = false;
};

LineshapeFit fit_asymmetry_lineshape(std::span<const double> epsilon, std::span<const double> difference,
                                     std::span<const double> sum);

enum class PeakMethod
{
    local_quadratic,
    lineshape_fit,
};

struct EstimateOptions
{
    PeakMethod method = PeakMethod::lineshape_fit;
    std::size_t bootstrap = 200;
    std::uint64_t seed = 0;
    // The bound is recomputed on an eps axis multiplied by this factor.
    double axis_rescale = 3.0;
    // Known overall scale of the spectrum. When set, the exact value is checked
    // against the spectrum it implies; a baseline or scale mismatch flags it.
    std::optional<double> expected_scale = 1.0;
    double sum_floor_rel = default_sum_floor_rel;
};

struct QualityFlags
{
    bool boundary_peak = false;
    bool degenerate_peak = false;
    bool inconsistent_peak = false;
    bool exact_unreliable = false;
    bool axis_rescale_mismatch = false;
    bool bootstrap_failures = false;

    bool any() const;
    std::vector<std::string> names() const;
};

struct CoherenceReport
{
    CoherenceEstimate estimate;
    AsymmetryPeak estimate_peak;  // peak used for the estimate (chosen method)
    RefinedPeak peak;             // discrete argmax with local refinement, for diagnostics
    AsymmetryCurve curve;
    double bound_rescaled = 0.0;
    std::optional<double> exact_ci_lo;  // bootstrap 2.5 / 97.5 percentiles
    std::optional<double> exact_ci_hi;
    std::size_t bootstrap_requested = 0;
    std::size_t bootstrap_used = 0;
    std::optional<double> model_misfit_rms;  // data vs expected_scale * I(eps; q_hat, g_hat)
    double noise_rms = 0.0;                  // per-sample noise implied by the asymmetry residuals
    std::optional<double> q_hat;             // sign(q) * sqrt(eps0^2 - 2 + 2 g_hat)
    QualityFlags flags;
};

// Single-spectrum coherence estimate: asymmetry curve, peak, lower bound and
// exact inversion, with a residual bootstrap for the uncertainties.
CoherenceReport estimate_coherence(const Spectrum& s, const EstimateOptions& options = {});

}  // namespace fanocoh

#endif  // FANOCOH_EMPIRICAL_HPP
