#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "fanocoh/model.hpp"

using namespace fanocoh;
using doctest::Approx;

namespace
{

constexpr double pi = std::numbers::pi;

double intensity(double eps, double q, double g)
{
    return fano_intensity(Detuning(eps), FanoParams(q, g));
}

// Extended-precision evaluation, so a 1e-6 central difference is not rounding-limited.
long double intensity_ld(long double eps, long double q, long double g)
{
    return (eps * eps + q * q + 2 * q * eps * g + 2 * (1 - g)) / ((1 + eps * eps) * (1 + q * q));
}

// Independent oracle: |e_a + e_b|^2 with the cross term weighted by g.
double decomposed(double eps, double q, double g)
{
    const std::complex<double> i{0.0, 1.0};
    const auto ea = 1.0 / (q - i);
    const auto eb = 1.0 / (eps + i);
    return std::norm(ea) + std::norm(eb) + 2.0 * g * std::real(std::conj(ea) * eb);
}

}  // namespace

TEST_CASE("detuning and parameter validation")
{
    CHECK(Detuning::from_energy(14.4, 14.0, 0.1).epsilon == Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(Detuning::from_energy(1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Detuning::from_energy(1.0, 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS(Detuning(std::nan("")));
    CHECK_THROWS(FanoParams(1.0, 1.5));
    CHECK_THROWS(FanoParams(1.0, -0.1));
    CHECK_THROWS(FanoParams(INFINITY, 0.5));
    CHECK_NOTHROW(FanoParams(0.0, 0.0));
}

TEST_CASE("channel amplitudes")
{
    const auto origin = channel_amplitudes(Detuning(0.0), 0.0);
    CHECK(std::abs(origin.continuum - std::complex<double>(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(origin.resonant - std::complex<double>(0.0, -1.0)) < 1e-15);

    const auto unit = channel_amplitudes(Detuning(1.0), 1.0);
    CHECK(std::norm(unit.continuum) == Approx(0.5).epsilon(1e-15));
    CHECK(std::norm(unit.resonant) == Approx(0.5).epsilon(1e-15));

    const auto c = channel_amplitudes(Detuning(2.0), 3.0);
    CHECK(std::norm(c.continuum) == Approx(0.1).epsilon(1e-14));
    CHECK(std::norm(c.resonant) == Approx(0.2).epsilon(1e-14));
}

TEST_CASE("relative phase")
{
    CHECK(relative_phase(Detuning(0.0), 0.0) == Approx(pi).epsilon(1e-15));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uq(-20.0, 20.0);
    for (int k = 0; k < 200; ++k)
    {
        const double q = uq(rng);
        if (q == 0.0)
            continue;
        const double phi = relative_phase(Detuning(-q), q);
        CHECK(std::abs(phi - pi) < 1e-12);
        // g = 1 maximum sits off the in-phase point
        const double at_max = relative_phase(Detuning(1.0 / q), q);
        CHECK(std::abs(std::remainder(at_max, 2.0 * pi)) > 1e-3);
        // phase equals arg(conj(e_a) e_b)
        const double eps = uq(rng);
        const auto a = channel_amplitudes(Detuning(eps), q);
        const double ref = std::arg(std::conj(a.continuum) * a.resonant);
        CHECK(std::abs(std::remainder(relative_phase(Detuning(eps), q) - ref, 2.0 * pi)) < 1e-12);
        const double w = relative_phase(Detuning(eps), q);
        CHECK(w > -pi);
        CHECK(w <= pi);
    }
}

TEST_CASE("fano intensity examples")
{
    CHECK(intensity(-2.0, 2.0, 1.0) == 0.0);
    CHECK(intensity(0.0, 0.0, 0.5) == Approx(1.0).epsilon(1e-15));
    CHECK(intensity(1.0, -1.5, 1.0) == Approx(0.25 / 6.5).epsilon(1e-14));
    CHECK(fano_intensity_ideal(Detuning(-3.7), 3.7) == 0.0);
    CHECK(fano_intensity_ideal(Detuning(0.5), 2.0) == Approx(1.0).epsilon(1e-15));
    CHECK(fano_intensity_ideal(Detuning(1e6), 2.0) == Approx(0.2).epsilon(1e-5));
}

TEST_CASE("fano intensity properties")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ue(-100.0, 100.0), uq(-10.0, 10.0), ug(0.0, 1.0);
    for (int k = 0; k < 5000; ++k)
    {
        const double eps = ue(rng), q = uq(rng), g = ug(rng);
        const double i = intensity(eps, q, g);
        CHECK(i >= 0.0);
        CHECK(std::abs(i - decomposed(eps, q, g)) <= 1e-14 * std::max(1.0, i) + 1e-15);
        const double ideal = fano_intensity_ideal(Detuning(eps), q);
        CHECK(std::abs(intensity(eps, q, 1.0) - ideal) <= 1e-14 * std::max(ideal, 1e-2));
    }
}

TEST_CASE("flat spectrum at q = 0, g = 1/2")
{
    double lo = INFINITY, hi = -INFINITY;
    for (int k = 0; k <= 100000; ++k)
    {
        const double v = intensity(-50.0 + 100.0 * k / 100000.0, 0.0, 0.5);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi - lo < 1e-12);
}

TEST_CASE("mzi intensity")
{
    const ChannelIntensities balanced(0.5, 0.5);
    CHECK(std::abs(mzi_intensity(pi, balanced, 1.0)) < 1e-15);
    CHECK(mzi_intensity(0.7, ChannelIntensities(0.3, 0.7), 0.0) == Approx(1.0).epsilon(1e-15));
    CHECK(mzi_intensity(0.0, balanced, 0.5) == Approx(1.5).epsilon(1e-15));
    CHECK_THROWS(mzi_intensity(0.0, balanced, 1.01));
    CHECK_THROWS(mzi_intensity(0.0, balanced, -0.01));
    CHECK_THROWS(ChannelIntensities(-0.1, 0.5));
}

TEST_CASE("stationary points")
{
    SUBCASE("g = 1 extrema")
    {
        const auto sp = fano_stationary_points(FanoParams(2.0, 1.0));
        REQUIRE(sp.points.size() == 2);
        CHECK(sp.points[0].epsilon == Approx(-2.0).epsilon(1e-14));
        CHECK(std::abs(sp.points[0].intensity) < 1e-15);
        CHECK(sp.points[0].kind == ExtremumKind::minimum);
        CHECK(sp.points[1].epsilon == Approx(0.5).epsilon(1e-14));
        CHECK(sp.points[1].intensity == Approx(1.0).epsilon(1e-14));
        CHECK(sp.points[1].kind == ExtremumKind::maximum);
        CHECK(sp.asymptote == Approx(0.2));
    }
    SUBCASE("flat")
    {
        const auto sp = fano_stationary_points(FanoParams(0.0, 0.5));
        CHECK(sp.flat);
        CHECK(sp.points.empty());
        CHECK(sp.asymptote == Approx(1.0));
    }
    SUBCASE("q = 0, g = 0")
    {
        const auto sp = fano_stationary_points(FanoParams(0.0, 0.0));
        CHECK(sp.degenerate);
        REQUIRE(sp.points.size() == 1);
        CHECK(sp.points[0].epsilon == 0.0);
        CHECK(sp.points[0].intensity == Approx(2.0));
        CHECK(sp.points[0].kind == ExtremumKind::maximum);
        CHECK(sp.asymptote == Approx(1.0));
    }
    SUBCASE("derivative vanishes and kinds agree with neighbours")
    {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> uq(-10.0, 10.0), ug(0.0, 1.0);
        for (int k = 0; k < 2000; ++k)
        {
            const double q = uq(rng), g = ug(rng);
            for (const auto& pt : fano_stationary_points(FanoParams(q, g)).points)
            {
                const long double h = 1e-6L, e = pt.epsilon;
                const double d = static_cast<double>((intensity_ld(e + h, q, g) - intensity_ld(e - h, q, g)) / (2 * h));
                CHECK(std::abs(d) < 1e-10);
                CHECK(pt.intensity == Approx(intensity(pt.epsilon, q, g)).epsilon(1e-13));
                const double step = 1e-3 * (1.0 + std::abs(pt.epsilon));
                const double side = std::max(intensity(pt.epsilon - step, q, g), intensity(pt.epsilon + step, q, g));
                if (pt.kind == ExtremumKind::maximum)
                    CHECK(side <= pt.intensity);
                else
                    CHECK(std::min(intensity(pt.epsilon - step, q, g), intensity(pt.epsilon + step, q, g)) >=
                          pt.intensity);
            }
        }
    }
}
