#include "fanocoh/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fanocoh
{

PooledEstimate combine_multi_q(std::span<const QEstimate> estimates)
{
    if (estimates.size() < 2)
        throw std::invalid_argument("combine_multi_q: need at least two estimates");

    PooledEstimate out;
    double sum_w = 0.0, sum_wg = 0.0;
    bool any_information = false;
    for (const auto& [q, est] : estimates)
    {
        out.lower_bound = std::max(out.lower_bound, est.lower_bound);
        if (est.lower_bound > 0.0 || est.exact)
            any_information = true;
        if (est.exact)
        {
            if (!est.exact_sigma || !(*est.exact_sigma > 0.0) || !std::isfinite(*est.exact_sigma))
                throw std::invalid_argument("combine_multi_q: exact estimate without a positive finite uncertainty");
            const double w = 1.0 / (*est.exact_sigma * *est.exact_sigma);
            out.per_q.push_back({q, *est.exact, w});
            sum_w += w;
            sum_wg += w * *est.exact;
        }
        else
        {
            out.per_q.push_back({q, est.lower_bound, 0.0});
        }
    }
    if (!any_information)
        throw std::invalid_argument("combine_multi_q: all estimates are degenerate");

    if (sum_w == 0.0)
    {
        out.bounds_only = true;
        return out;
    }

    const double mean = sum_wg / sum_w;
    out.g_pooled = mean;
    out.sigma = 1.0 / std::sqrt(sum_w);
    double acc = 0.0;
    for (const auto& e : out.per_q)
    {
        if (e.weight == 0.0)
            continue;
        acc += e.weight * (e.g_hat - mean) * (e.g_hat - mean);
        if (std::abs(e.g_hat - mean) * std::sqrt(e.weight) > 3.0)
            out.inconsistent = true;
    }
    out.dispersion = std::sqrt(acc / sum_w);
    return out;
}

}  // namespace fanocoh
