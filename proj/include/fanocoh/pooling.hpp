#ifndef FANOCOH_POOLING_HPP
#define FANOCOH_POOLING_HPP

#include <optional>
#include <span>
#include <vector>

#include "fanocoh/asymmetry.hpp"

namespace fanocoh
{

struct QEstimate
{
    double q;
    CoherenceEstimate estimate;
};

struct PooledEntry
{
    double q;
    double g_hat;   // exact value, or the lower bound for bound-only entries
    double weight;  // inverse variance; 0 when the entry only contributes a bound
};

// Coherence pooled over spectra taken at different q, assuming g does not depend on q.
struct PooledEstimate
{
    std::optional<double> g_pooled;  // inverse-variance weighted mean of exact values
    std::optional<double> sigma;     // 1 / sqrt(sum of weights)
    double lower_bound = 0.0;        // max of the individual lower bounds
    std::vector<PooledEntry> per_q;
    double dispersion = 0.0;         // weighted standard deviation about g_pooled
    bool inconsistent = false;       // some entry deviates from g_pooled by more than 3 sigma
    bool bounds_only = false;
};

// Throws std::invalid_argument for fewer than two estimates, exact values without a
// positive finite uncertainty, or when every estimate is degenerate.
PooledEstimate combine_multi_q(std::span<const QEstimate> estimates);

}  // namespace fanocoh

#endif  // FANOCOH_POOLING_HPP
