#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "fanocoh/asymmetry.hpp"
#include "fanocoh/model.hpp"

using namespace fanocoh;
using doctest::Approx;

namespace
{

double definitional(double eps, double q, double g)
{
    const FanoParams p(q, g);
    const double a = fano_intensity(Detuning(eps), p), b = fano_intensity(Detuning(-eps), p);
    return std::abs(a - b) / (a + b);
}

// Numerical peak of the definitional asymmetry, independent of the closed forms.
std::pair<double, double> brent_peak(double q, double g)
{
    const auto r = boost::math::tools::brent_find_minima([&](double x) { return -definitional(x, q, g); }, 1e-6,
                                                         10.0 * (std::abs(q) + 2.0), 52);
    return {r.first, -r.second};
}

}  // namespace

TEST_CASE("asymmetry closed form")
{
    CHECK(asymmetry(Detuning(0.0), FanoParams(2.0, 0.7)) == 0.0);
    CHECK(asymmetry(Detuning(1.3), FanoParams(2.0, 0.0)) == 0.0);
    CHECK(asymmetry(Detuning(std::sqrt(9.4)), FanoParams(3.0, 0.8)) == Approx(0.782795).epsilon(1e-6));
    CHECK(asymmetry(Detuning(-1.1), FanoParams(2.0, 0.5)) == asymmetry(Detuning(1.1), FanoParams(2.0, 0.5)));

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ue(0.0, 30.0), uq(-10.0, 10.0), ug(0.0, 1.0);
    for (int k = 0; k < 5000; ++k)
    {
        const double eps = ue(rng), q = uq(rng), g = ug(rng);
        CHECK(std::abs(asymmetry(Detuning(eps), FanoParams(q, g)) - definitional(eps, q, g)) < 1e-13);
    }
}

TEST_CASE("asymmetry of an arbitrary function")
{
    const auto even = [](double x) { return 1.0 + x * x; };
    CHECK(*asymmetry_of(even, 2.0) == 0.0);
    CHECK_FALSE(asymmetry_of([](double) { return 0.0; }, 1.0).has_value());

    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> ue(0.01, 20.0), uq(-10.0, 10.0), ug(0.01, 1.0);
    for (int k = 0; k < 500; ++k)
    {
        const double eps = ue(rng), q = uq(rng), g = ug(rng);
        const FanoParams p(q, g);
        const auto fano = [&](double x) { return fano_intensity(Detuning(x), p); };
        const double clean = *asymmetry_of(fano, eps);
        CHECK(clean == Approx(asymmetry(Detuning(eps), p)).epsilon(1e-12));
        const auto with_baseline = [&](double x) { return fano(x) + 0.3; };
        if (clean > 1e-12)
            CHECK(*asymmetry_of(with_baseline, eps) < clean);
    }
}

TEST_CASE("asymmetry peak")
{
    const auto p3 = asymmetry_peak(FanoParams(3.0, 0.8));
    const auto o3 = brent_peak(3.0, 0.8);
    CHECK(p3.eps0 == Approx(o3.first).epsilon(1e-7));
    CHECK(p3.a_max == Approx(o3.second).epsilon(1e-12));
    CHECK(p3.eps0 == Approx(3.0659419433511785).epsilon(1e-15));
    CHECK(p3.a_max == Approx(0.78279368766413071).epsilon(1e-15));

    const auto p05 = asymmetry_peak(FanoParams(0.5, 0.8));
    const auto o05 = brent_peak(0.5, 0.8);
    CHECK(p05.eps0 == Approx(o05.first).epsilon(1e-7));
    CHECK(p05.a_max == Approx(o05.second).epsilon(1e-12));
    CHECK(p05.eps0 == Approx(0.80622577482985491).epsilon(1e-15));
    CHECK(p05.a_max == Approx(0.49613893835683387).epsilon(1e-15));

    CHECK(asymmetry_peak(FanoParams(-4.2, 1.0)).a_max == Approx(1.0).epsilon(1e-15));
    CHECK(asymmetry_peak(FanoParams(0.0, 0.7)).degenerate);
    CHECK(asymmetry_peak(FanoParams(1.0, 0.0)).degenerate);
    CHECK(asymmetry_peak(FanoParams(0.0, 0.7)).a_max == 0.0);
}

TEST_CASE("bound chain and peak property")
{
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> ue(0.0, 50.0), uq(-20.0, 20.0), ug(0.0, 1.0);
    for (int k = 0; k < 10000; ++k)
    {
        const double eps = ue(rng), q = uq(rng), g = ug(rng);
        const FanoParams p(q, g);
        const auto pk = asymmetry_peak(p);
        CHECK(asymmetry(Detuning(eps), p) <= pk.a_max + 1e-12);
        CHECK(pk.a_max <= g + 1e-12);
        if (!pk.degenerate)
        {
            const double d = 1e-3 * (1.0 + pk.eps0);
            CHECK(asymmetry(Detuning(pk.eps0 + d), p) < pk.a_max);
            CHECK(asymmetry(Detuning(pk.eps0 - d), p) < pk.a_max);
        }
    }
}

TEST_CASE("bound tightens with |q|")
{
    for (double g : {0.1, 0.5, 0.8, 0.99})
    {
        double last = 0.0;
        for (double q = 0.05; q < 50.0; q *= 1.3)
        {
            const double a = asymmetry_peak(FanoParams(q, g)).a_max;
            CHECK(a > last);
            last = a;
        }
    }
    const auto far = asymmetry_peak(FanoParams(100.0, 0.8));
    CHECK(std::abs(coherence_lower_bound(far) - 0.8 / std::sqrt(1.00004)) < 1e-15);
    CHECK(std::abs(coherence_lower_bound(far) - 0.799984) < 1e-6);
    CHECK((0.8 - far.a_max) == Approx(1.6e-5).epsilon(0.01));
}

TEST_CASE("exact inversion")
{
    SUBCASE("round trip grid")
    {
        for (double q : {-10.0, -3.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 3.0, 10.0})
            for (int k = 1; k <= 20; ++k)
            {
                const double g = 0.05 * k;
                const auto est = coherence_exact(asymmetry_peak(FanoParams(q, g)));
                REQUIRE(est.exact.has_value());
                CHECK(std::abs(*est.exact - g) < 1e-9);
                CHECK(est.lower_bound <= *est.exact + 1e-9);
                CHECK(std::abs(est.residual) < 1e-12);
                if (est.closed_form)
                    CHECK(std::abs(*est.closed_form - *est.exact) < 1e-9);
            }
    }
    SUBCASE("eps0^2 = 2 reduces to g = a^(2/3)")
    {
        for (double a : {0.1, 0.4, 0.7, 0.95})
        {
            const auto est = coherence_exact(AsymmetryPeak{std::sqrt(2.0), a, false});
            CHECK(*est.exact == Approx(std::pow(a, 2.0 / 3.0)).epsilon(1e-12));
        }
    }
    SUBCASE("boundary and degenerate inputs")
    {
        const auto one = coherence_exact(AsymmetryPeak{2.5, 1.0, false});
        CHECK(*one.exact == 1.0);
        CHECK(one.method == InversionMethod::analytic);
        CHECK_FALSE(coherence_exact(AsymmetryPeak{0.0, 0.0, true}).exact.has_value());
        CHECK_FALSE(coherence_exact(asymmetry_peak(FanoParams(0.0, 1.0))).exact.has_value());
        CHECK_FALSE(coherence_exact(AsymmetryPeak{1.5, 0.0, false}).exact.has_value());
        CHECK_THROWS_AS(coherence_exact(AsymmetryPeak{1.0, 1.2, false}), InconsistentPeak);
    }
    SUBCASE("closed form is real only on part of the domain")
    {
        CHECK(coherence_closed_form(std::sqrt(2.0 * 0.2 + 0.25), 0.4 / std::sqrt(0.65)).has_value());
        int real = 0, total = 0;
        for (double e = 0.1; e < 6.0; e += 0.1)
            for (double a = 0.05; a < 1.0; a += 0.05)
            {
                ++total;
                const double radicand = 27 * std::pow(a * e, 4) - a * a * e * e * std::pow(e * e - 2, 3);
                const auto cf = coherence_closed_form(e, a);
                CHECK(cf.has_value() == (radicand >= 0.0));
                real += cf.has_value();
            }
        CHECK(real > 0);
        CHECK(real < total);
    }
}

TEST_CASE("mimicry map")
{
    const auto residual = [](double q, double g) {
        const auto m = mimicry_map(q, g);
        double worst = 0.0;
        for (int k = 0; k <= 10000; ++k)
        {
            const Detuning d(-50.0 + 100.0 * k / 10000.0);
            worst = std::max(worst, std::abs(m.alpha * (m.beta + fano_intensity(d, FanoParams(q, g))) -
                                             fano_intensity(d, FanoParams(m.q_prime, 1.0))));
        }
        return worst;
    };

    const auto id = mimicry_map(1.7, 1.0);
    CHECK(id.alpha == Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(id.beta) < 1e-15);
    CHECK(id.q_prime == Approx(1.7).epsilon(1e-15));

    const auto m = mimicry_map(2.0, 0.6);
    CHECK(m.alpha > 0.0);
    CHECK(residual(2.0, 0.6) < 1e-12);

    for (double g : {0.0, 0.3, 0.7, 1.0})
    {
        CHECK(mimicry_map(0.0, g).q_prime == 0.0);
        CHECK(residual(0.0, g) < 1e-12);
    }
    CHECK_THROWS_AS(mimicry_map(0.0, 0.5), std::domain_error);

    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> uq(-10.0, 10.0), ug(0.0, 1.0);
    for (int k = 0; k < 50; ++k)
    {
        const double q = uq(rng), g = ug(rng);
        const auto mm = mimicry_map(q, g);
        CHECK(mm.beta <= 0.0);
        CHECK(std::signbit(mm.q_prime) == std::signbit(q));
        CHECK(residual(q, g) < 1e-12);
    }
}
