#include "fanocoh/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/minima.hpp>

namespace fanocoh
{

namespace
{

struct PeakOutcome
{
    AsymmetryPeak peak;
    double sign = 1.0;
    bool at_boundary = false;
};

double linear_at(std::span<const double> x, std::span<const double> y, std::size_t hi, double t)
{
    const std::size_t lo = hi - 1;
    const double w = (t - x[lo]) / (x[hi] - x[lo]);
    return y[lo] + w * (y[hi] - y[lo]);
}

double rms(std::span<const double> v)
{
    if (v.empty())
        return 0.0;
    double acc = 0.0;
    for (double x : v)
        acc += x * x;
    return std::sqrt(acc / static_cast<double>(v.size()));
}

// Peak of the asymmetry described by (difference, sum) with the chosen method.
PeakOutcome locate_peak(PeakMethod method, std::span<const double> eps, std::span<const double> diff,
                        std::span<const double> sum)
{
    PeakOutcome out;
    if (method == PeakMethod::lineshape_fit)
    {
        const LineshapeFit fit = fit_asymmetry_lineshape(eps, diff, sum);
        out.peak.eps0 = fit.eps0;
        out.peak.a_max = std::abs(fit.amplitude);
        out.peak.degenerate = fit.amplitude == 0.0;
        out.sign = fit.amplitude < 0.0 ? -1.0 : 1.0;
        out.at_boundary = fit.at_boundary;
        return out;
    }
    std::vector<double> a(eps.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = std::abs(diff[i]) / sum[i];
    const RefinedPeak rp = find_asymmetry_peak(eps, a);
    out.peak = rp.peak;
    out.sign = diff[rp.index] < 0.0 ? -1.0 : 1.0;
    out.at_boundary = rp.at_boundary;
    return out;
}

double lineshape(double eps, double eps0)
{
    return 2.0 * eps * eps0 / (eps * eps + eps0 * eps0);
}

}  // namespace

AsymmetryCurve empirical_asymmetry(const Spectrum& s, double sum_floor_rel)
{
    s.require_analyzable();
    const auto eps = s.epsilon();
    const auto y = s.intensity();

    AsymmetryCurve curve;
    curve.eps_limit = std::min(-eps.front(), eps.back());
    if (!(curve.eps_limit > 0.0))
        throw std::invalid_argument("empirical_asymmetry: spectrum does not cover both sides of eps = 0");

    using boost::math::interpolators::pchip;
    auto cubic = pchip<std::vector<double>>(std::vector<double>(eps.begin(), eps.end()),
                                            std::vector<double>(y.begin(), y.end()));

    const double floor = sum_floor_rel * *std::max_element(y.begin(), y.end());

    for (std::size_t i = 0; i < eps.size(); ++i)
    {
        const double e = eps[i];
        if (e < 0.0 || e > curve.eps_limit)
            continue;

        const double target = -e;
        const auto it = std::lower_bound(eps.begin(), eps.end(), target);
        const std::size_t j = static_cast<std::size_t>(it - eps.begin());
        const double tol = 1e-12 * std::max(1.0, std::abs(target));
        double mirrored;
        if (j < eps.size() && std::abs(eps[j] - target) <= tol)
            mirrored = y[j];
        else if (j > 0 && std::abs(eps[j - 1] - target) <= tol)
            mirrored = y[j - 1];
        else
        {
            mirrored = cubic(target);
            ++curve.interpolated;
            curve.interpolation_spread =
                std::max(curve.interpolation_spread, std::abs(mirrored - linear_at(eps, y, j, target)));
        }

        const double sum = y[i] + mirrored;
        if (!(sum >= floor) || sum == 0.0)
        {
            ++curve.dropped;
            continue;
        }
        const double diff = y[i] - mirrored;
        curve.epsilon.push_back(e);
        curve.difference.push_back(diff);
        curve.sum.push_back(sum);
        curve.value.push_back(std::abs(diff) / sum);
    }

    if (curve.epsilon.size() < 3)
        throw std::invalid_argument("empirical_asymmetry: fewer than 3 usable symmetric points");
    return curve;
}

RefinedPeak find_asymmetry_peak(std::span<const double> epsilon, std::span<const double> value)
{
    if (epsilon.size() != value.size())
        throw std::invalid_argument("find_asymmetry_peak: length mismatch");
    if (epsilon.size() < 3)
        throw std::invalid_argument("find_asymmetry_peak: need at least 3 points");

    RefinedPeak rp;
    rp.index = static_cast<std::size_t>(std::max_element(value.begin(), value.end()) - value.begin());
    rp.raw_eps = epsilon[rp.index];
    rp.raw_value = value[rp.index];
    rp.peak.eps0 = rp.raw_eps;
    rp.peak.a_max = rp.raw_value;
    rp.peak.degenerate = rp.raw_value == 0.0;
    rp.at_boundary = rp.index == 0 || rp.index + 1 == epsilon.size();
    if (rp.at_boundary || rp.peak.degenerate)
        return rp;

    const std::size_t i = rp.index;
    const bool log_axis = epsilon[i - 1] > 0.0;
    auto axis = [&](double e) { return log_axis ? std::log(e) : e; };
    const double x0 = axis(epsilon[i - 1]), x1 = axis(epsilon[i]), x2 = axis(epsilon[i + 1]);
    const double y0 = value[i - 1], y1 = value[i], y2 = value[i + 1];

    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double c2 = (d12 - d01) / (x2 - x0);
    rp.curvature = 2.0 * c2;
    if (!(c2 < 0.0))
        return rp;

    const double c1 = d01 - c2 * (x0 + x1);
    const double xv = std::clamp(-c1 / (2.0 * c2), x0, x2);
    rp.peak.eps0 = log_axis ? std::exp(xv) : xv;
    rp.peak.a_max = y0 + (xv - x0) * d01 + c2 * (xv - x0) * (xv - x1);
    return rp;
}

RefinedPeak find_asymmetry_peak(const AsymmetryCurve& curve)
{
    return find_asymmetry_peak(curve.epsilon, curve.value);
}

LineshapeFit fit_asymmetry_lineshape(std::span<const double> epsilon, std::span<const double> difference,
                                     std::span<const double> sum)
{
    if (epsilon.size() != difference.size() || epsilon.size() != sum.size())
        throw std::invalid_argument("fit_asymmetry_lineshape: length mismatch");

    std::vector<double> e, d, s;
    for (std::size_t i = 0; i < epsilon.size(); ++i)
    {
        if (epsilon[i] > 0.0)
        {
            e.push_back(epsilon[i]);
            d.push_back(difference[i]);
            s.push_back(sum[i]);
        }
    }
    if (e.size() < 2)
        throw std::invalid_argument("fit_asymmetry_lineshape: need at least 2 points with eps > 0");

    const double dd = std::inner_product(d.begin(), d.end(), d.begin(), 0.0);
    const double e_lo = e.front();
    const double e_hi = e.back();

    // For fixed eps0 the amplitude is linear; profile it out.
    auto profile = [&](double log_eps0, double* amplitude) {
        const double eps0 = std::exp(log_eps0);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i)
        {
            const double basis = lineshape(e[i], eps0) * s[i];
            num += d[i] * basis;
            den += basis * basis;
        }
        if (amplitude)
            *amplitude = den > 0.0 ? num / den : 0.0;
        return den > 0.0 ? dd - num * num / den : dd;
    };

    LineshapeFit fit;
    if (dd == 0.0)
    {
        fit.eps0 = std::sqrt(e_lo * e_hi);
        return fit;
    }

    constexpr int scan = 64;
    const double u_lo = std::log(e_lo) - std::log(2.0);
    const double u_hi = std::log(e_hi) + std::log(2.0);
    const double du = (u_hi - u_lo) / (scan - 1);
    int best = 0;
    double best_cost = profile(u_lo, nullptr);
    for (int k = 1; k < scan; ++k)
    {
        const double c = profile(u_lo + du * k, nullptr);
        if (c < best_cost)
        {
            best_cost = c;
            best = k;
        }
    }
    const double a = u_lo + du * std::max(best - 1, 0);
    const double b = u_lo + du * std::min(best + 1, scan - 1);
    const auto [u, cost] = boost::math::tools::brent_find_minima(
        [&](double x) { return profile(x, nullptr); }, a, b, std::numeric_limits<double>::digits / 2);

    fit.eps0 = std::exp(u);
    profile(u, &fit.amplitude);
    fit.rss = std::max(cost, 0.0);
    fit.at_boundary = fit.eps0 <= e_lo || fit.eps0 >= e_hi;
    return fit;
}

bool QualityFlags::any() const
{
    return boundary_peak || degenerate_peak || inconsistent_peak || exact_unreliable || axis_rescale_mismatch ||
           bootstrap_failures;
}

std::vector<std::string> QualityFlags::names() const
{
    std::vector<std::string> out;
    if (boundary_peak)
        out.emplace_back("boundary-peak");
    if (degenerate_peak)
        out.emplace_back("degenerate-peak");
    if (inconsistent_peak)
        out.emplace_back("inconsistent-peak");
    if (exact_unreliable)
        out.emplace_back("exact-unreliable");
    if (axis_rescale_mismatch)
        out.emplace_back("axis-rescale-mismatch");
    if (bootstrap_failures)
        out.emplace_back("bootstrap-failures");
    return out;
}

CoherenceReport estimate_coherence(const Spectrum& s, const EstimateOptions& options)
{
    if (!(options.axis_rescale > 0.0) || !std::isfinite(options.axis_rescale))
        throw std::invalid_argument("estimate_coherence: axis rescale factor must be positive");
    if (options.expected_scale && !(*options.expected_scale > 0.0))
        throw std::invalid_argument("estimate_coherence: expected scale must be positive");

    CoherenceReport report;
    report.curve = empirical_asymmetry(s, options.sum_floor_rel);
    report.peak = find_asymmetry_peak(report.curve);
    const auto& curve = report.curve;

    const PeakOutcome main = locate_peak(options.method, curve.epsilon, curve.difference, curve.sum);
    report.estimate_peak = main.peak;
    report.flags.boundary_peak = main.at_boundary;
    report.flags.degenerate_peak = main.peak.degenerate;

    try
    {
        report.estimate = coherence_exact(main.peak);
    }
    catch (const InconsistentPeak&)
    {
        report.flags.inconsistent_peak = true;
        report.estimate.lower_bound = std::clamp(main.peak.a_max, 0.0, 1.0);
    }

    // The bound needs no calibrated detuning axis: redo it on eps * c.
    {
        std::vector<double> scaled(s.epsilon().begin(), s.epsilon().end());
        for (double& e : scaled)
            e *= options.axis_rescale;
        const Spectrum rescaled(std::move(scaled), std::vector<double>(s.intensity().begin(), s.intensity().end()));
        const AsymmetryCurve rc = empirical_asymmetry(rescaled, options.sum_floor_rel);
        const PeakOutcome rp = locate_peak(options.method, rc.epsilon, rc.difference, rc.sum);
        report.bound_rescaled = std::clamp(rp.peak.a_max, 0.0, 1.0);
        report.flags.axis_rescale_mismatch = std::abs(report.bound_rescaled - report.estimate.lower_bound) > 1e-6;
    }

    // Residual model for the bootstrap: the fitted asymmetry lineshape.
    const LineshapeFit model = fit_asymmetry_lineshape(curve.epsilon, curve.difference, curve.sum);
    const std::size_t n = curve.epsilon.size();
    std::vector<double> fitted(n), residual(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        fitted[i] = model.amplitude * lineshape(curve.epsilon[i], model.eps0) * curve.sum[i];
        residual[i] = curve.difference[i] - fitted[i];
    }
    // Each difference combines two independent samples.
    report.noise_rms = rms(residual) / std::sqrt(2.0);

    report.bootstrap_requested = options.bootstrap;
    if (options.bootstrap > 0)
    {
        std::vector<double> bounds, exacts;
        bounds.reserve(options.bootstrap);
        exacts.reserve(options.bootstrap);
        std::vector<double> replica(n);
        for (std::size_t b = 0; b < options.bootstrap; ++b)
        {
            std::mt19937_64 rng(stream_seed(options.seed, b + 1));
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (std::size_t i = 0; i < n; ++i)
                replica[i] = fitted[i] + residual[pick(rng)];
            const PeakOutcome po = locate_peak(options.method, curve.epsilon, replica, curve.sum);
            try
            {
                const CoherenceEstimate e = coherence_exact(po.peak);
                bounds.push_back(e.lower_bound);
                if (e.exact)
                    exacts.push_back(*e.exact);
            }
            catch (const InconsistentPeak&)
            {
            }
        }
        auto stdev = [](const std::vector<double>& v) -> std::optional<double> {
            if (v.size() < 2)
                return std::nullopt;
            const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            double acc = 0.0;
            for (double x : v)
                acc += (x - mean) * (x - mean);
            return std::sqrt(acc / static_cast<double>(v.size() - 1));
        };
        report.bootstrap_used = exacts.size();
        report.estimate.lower_bound_sigma = stdev(bounds);
        report.estimate.exact_sigma = stdev(exacts);
        if (exacts.size() >= 2)
        {
            std::sort(exacts.begin(), exacts.end());
            auto pct = [&](double p) {
                const double pos = p * static_cast<double>(exacts.size() - 1);
                const auto k = static_cast<std::size_t>(pos);
                const double w = pos - static_cast<double>(k);
                return k + 1 < exacts.size() ? exacts[k] * (1.0 - w) + exacts[k + 1] * w : exacts[k];
            };
            report.exact_ci_lo = pct(0.025);
            report.exact_ci_hi = pct(0.975);
        }
        const std::size_t failures = options.bootstrap - exacts.size();
        report.flags.bootstrap_failures = !main.peak.degenerate && failures * 20 > options.bootstrap;
    }

    if (report.estimate.exact)
    {
        const double g = *report.estimate.exact;
        const double q2 = main.peak.eps0 * main.peak.eps0 - 2.0 + 2.0 * g;
        report.q_hat = main.sign * std::sqrt(std::max(q2, 0.0));
        if (options.expected_scale)
        {
            const FanoParams implied(*report.q_hat, g);
            const auto eps = s.epsilon();
            const auto y = s.intensity();
            std::vector<double> misfit(eps.size());
            for (std::size_t i = 0; i < eps.size(); ++i)
                misfit[i] = y[i] - *options.expected_scale * fano_intensity(Detuning(eps[i]), implied);
            report.model_misfit_rms = rms(misfit);
            const double peak_intensity = *std::max_element(y.begin(), y.end());
            report.flags.exact_unreliable =
                *report.model_misfit_rms > 3.0 * report.noise_rms + 1e-6 * peak_intensity;
        }
    }

    return report;
}

}  // namespace fanocoh
