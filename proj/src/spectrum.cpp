#include "fanocoh/spectrum.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <stdexcept>

namespace fanocoh
{

namespace
{

std::string shortest(double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

Spectrum::Spectrum(std::vector<double> epsilon, std::vector<double> intensity, Provenance meta)
    : epsilon_(std::move(epsilon)), intensity_(std::move(intensity)), meta_(std::move(meta))
{
    if (epsilon_.size() != intensity_.size())
        throw std::invalid_argument("spectrum: detuning and intensity lengths differ");
    for (std::size_t i = 0; i < epsilon_.size(); ++i)
    {
        if (!std::isfinite(epsilon_[i]) || !std::isfinite(intensity_[i]))
            throw std::invalid_argument("spectrum: non-finite sample at index " + std::to_string(i));
        if (intensity_[i] < 0.0)
            throw std::invalid_argument("spectrum: negative intensity at index " + std::to_string(i));
        if (i > 0 && !(epsilon_[i] > epsilon_[i - 1]))
            throw std::invalid_argument("spectrum: detuning not strictly increasing at index " +
                                        std::to_string(i));
    }
}

void Spectrum::require_analyzable() const
{
    if (size() < min_analysis_samples)
        throw std::invalid_argument("spectrum: at least " + std::to_string(min_analysis_samples) +
                                    " samples required, got " + std::to_string(size()));
}

NoiseModel NoiseModel::gaussian(double sigma, std::uint64_t seed)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("gaussian noise: sigma must be positive");
    NoiseModel n;
    n.kind = Kind::gaussian;
    n.sigma = sigma;
    n.seed = seed;
    return n;
}

NoiseModel NoiseModel::poisson(double counts_scale, std::uint64_t seed)
{
    if (!(counts_scale > 0.0) || !std::isfinite(counts_scale))
        throw std::invalid_argument("poisson noise: counts scale must be positive");
    NoiseModel n;
    n.kind = Kind::poisson;
    n.counts_scale = counts_scale;
    n.seed = seed;
    return n;
}

std::string to_string(NoiseModel::Kind kind)
{
    switch (kind)
    {
        case NoiseModel::Kind::none:
            return "none";
        case NoiseModel::Kind::gaussian:
            return "gaussian";
        case NoiseModel::Kind::poisson:
            return "poisson";
    }
    return "unknown";
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    if (n < 2)
        throw std::invalid_argument("linspace: need at least two points");
    // Weighted form keeps grids with lo == -hi exactly mirror symmetric.
    std::vector<double> out(n);
    const double m = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double k = static_cast<double>(i);
        out[i] = ((m - k) * lo + k * hi) / m;
    }
    return out;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t k)
{
    std::uint64_t z = seed + k * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Spectrum synth_spectrum(const FanoParams& p, double scale, double baseline, std::span<const double> grid,
                        const NoiseModel& noise)
{
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("synth: scale must be positive");
    if (!(baseline >= 0.0) || !std::isfinite(baseline))
        throw std::invalid_argument("synth: baseline must be nonnegative");
    if (grid.size() < 2)
        throw std::invalid_argument("synth: grid needs at least two points");

    std::vector<double> eps(grid.begin(), grid.end());
    std::vector<double> value(eps.size());
    std::mt19937_64 rng(stream_seed(noise.seed, 0));
    std::size_t clamped = 0;

    for (std::size_t i = 0; i < eps.size(); ++i)
    {
        double v = scale * fano_intensity(Detuning(eps[i]), p) + baseline;
        switch (noise.kind)
        {
            case NoiseModel::Kind::none:
                break;
            case NoiseModel::Kind::gaussian:
                v += std::normal_distribution<double>(0.0, noise.sigma)(rng);
                break;
            case NoiseModel::Kind::poisson:
            {
                const double mean = v * noise.counts_scale;
                const double counts = mean > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(mean)(rng)) : 0.0;
                v = counts / noise.counts_scale;
                break;
            }
        }
        if (v < 0.0)
        {
            v = 0.0;
            ++clamped;
        }
        value[i] = v;
    }

    Provenance meta{
        {"source", "synthetic"},
        {"q", shortest(p.q())},
        {"g", shortest(p.g())},
        {"scale", shortest(scale)},
        {"baseline", shortest(baseline)},
        {"noise", to_string(noise.kind)},
        {"seed", std::to_string(noise.seed)},
        {"clamped", std::to_string(clamped)},
    };
    if (noise.kind == NoiseModel::Kind::gaussian)
        meta["sigma"] = shortest(noise.sigma);
    if (noise.kind == NoiseModel::Kind::poisson)
        meta["counts_scale"] = shortest(noise.counts_scale);

    return Spectrum(std::move(eps), std::move(value), std::move(meta));
}

}  // namespace fanocoh
