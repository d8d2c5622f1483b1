#ifndef FANOCOH_MODEL_HPP
#define FANOCOH_MODEL_HPP

#include <complex>
#include <vector>

namespace fanocoh
{

// Dimensionless detuning from the bound-state resonance, in units of twice
// the linewidth.
struct Detuning
{
    double epsilon = 0.0;

    constexpr Detuning() = default;
    explicit Detuning(double eps);

    // eps = (energy - resonance) / (2 * linewidth). linewidth must be > 0.
    static Detuning from_energy(double energy, double resonance, double linewidth);
};

// Lineshape parameters: Fano parameter q and coherence g = |g1| in [0, 1].
class FanoParams
{
public:
    FanoParams() = default;
    FanoParams(double q, double g);

    double q() const { return q_; }
    double g() const { return g_; }

private:
    double q_ = 0.0;
    double g_ = 1.0;
};

struct ChannelAmplitudes
{
    std::complex<double> continuum;  // 1 / (q - i)
    std::complex<double> resonant;   // 1 / (eps + i)
};

// Intensities of the two interferometer arms, each >= 0.
class ChannelIntensities
{
public:
    ChannelIntensities(double a, double b);

    double a() const { return a_; }
    double b() const { return b_; }

private:
    double a_;
    double b_;
};

ChannelAmplitudes channel_amplitudes(Detuning eps, double q);

// arg(conj(e_continuum) * e_resonant), wrapped to (-pi, pi].
double relative_phase(Detuning eps, double q);

// Fano intensity at partial coherence:
//   (eps^2 + q^2 + 2 q eps g + 2 (1 - g)) / ((1 + eps^2)(1 + q^2))
double fano_intensity(Detuning eps, const FanoParams& p);

// Fully coherent limit (eps + q)^2 / ((1 + eps^2)(1 + q^2)).
double fano_intensity_ideal(Detuning eps, double q);

// Two-arm interference signal I_A + I_B + 2 g sqrt(I_A I_B) cos(phi).
double mzi_intensity(double phi, const ChannelIntensities& ci, double g);

enum class ExtremumKind
{
    maximum,
    minimum
};

struct StationaryPoint
{
    double epsilon;
    double intensity;
    ExtremumKind kind;
};

struct StationaryPoints
{
    std::vector<StationaryPoint> points;  // sorted by epsilon
    double asymptote = 0.0;               // limit of the intensity for eps -> +-inf
    bool degenerate = false;              // q * g == 0, the stationarity quadratic is linear
    bool flat = false;                    // intensity is constant in eps
};

// Finite stationary points of fano_intensity in eps. They are the roots of
//   -q g eps^2 + (2 g - 1 - q^2) eps + q g = 0.
StationaryPoints fano_stationary_points(const FanoParams& p);

}  // namespace fanocoh

#endif  // FANOCOH_MODEL_HPP
