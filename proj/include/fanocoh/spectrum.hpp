#ifndef FANOCOH_SPECTRUM_HPP
#define FANOCOH_SPECTRUM_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fanocoh/model.hpp"

namespace fanocoh
{

// Flat key/value provenance record: synthesis parameters and seed, or the
// source file and its checksum.
using Provenance = std::map<std::string, std::string>;

// Intensity sampled on a strictly increasing detuning grid.
class Spectrum
{
public:
    static constexpr std::size_t min_analysis_samples = 8;

    Spectrum(std::vector<double> epsilon, std::vector<double> intensity, Provenance meta = {});

    std::span<const double> epsilon() const { return epsilon_; }
    std::span<const double> intensity() const { return intensity_; }
    std::size_t size() const { return epsilon_.size(); }
    const Provenance& meta() const { return meta_; }
    Provenance& meta() { return meta_; }

    // Throws std::invalid_argument unless the spectrum has enough samples to analyse.
    void require_analyzable() const;

private:
    std::vector<double> epsilon_;
    std::vector<double> intensity_;
    Provenance meta_;
};

struct NoiseModel
{
    enum class Kind
    {
        none,
        gaussian,     // additive, standard deviation sigma
        poisson,      // counts ~ Poisson(counts_scale * I), I = counts / counts_scale
    };

    Kind kind = Kind::none;
    double sigma = 0.0;
    double counts_scale = 0.0;
    std::uint64_t seed = 0;

    static NoiseModel none() { return {}; }
    static NoiseModel gaussian(double sigma, std::uint64_t seed);
    static NoiseModel poisson(double counts_scale, std::uint64_t seed);
};

std::string to_string(NoiseModel::Kind kind);

// n equally spaced points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

// Seed of the k-th independent random stream derived from a run seed
// (splitmix64 of seed + k). Results never depend on evaluation order.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t k);

// scale * I(eps; p) + baseline on the grid, then noise. Negative noisy values
// are clamped to zero and counted in meta["clamped"].
Spectrum synth_spectrum(const FanoParams& p, double scale, double baseline, std::span<const double> grid,
                        const NoiseModel& noise);

}  // namespace fanocoh

#endif  // FANOCOH_SPECTRUM_HPP
