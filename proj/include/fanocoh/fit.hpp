#ifndef FANOCOH_FIT_HPP
#define FANOCOH_FIT_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fanocoh/model.hpp"
#include "fanocoh/spectrum.hpp"

namespace fanocoh
{

// Parameters held fixed at the given value.
struct Freeze
{
    std::optional<double> q;
    std::optional<double> g;
    std::optional<double> scale;
    std::optional<double> baseline;

    std::size_t count() const;
    std::vector<std::string> names() const;
};

// Least-squares fit of scale * I(eps; q, g) + baseline.
struct FitResult
{
    FanoParams params;
    double scale = 1.0;
    double baseline = 0.0;
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();  // order q, g, scale, baseline
    double rss = 0.0;
    bool converged = false;
    std::vector<std::string> frozen;
    // All four parameters free: alpha (beta + I(q, g)) == I(q', 1) makes a whole
    // curve of parameter points produce the same spectrum.
    bool non_identifiable = false;
    bool rank_deficient = false;  // numerically singular normal matrix on the free subspace
    int iterations = 0;
    std::string message;
};

struct FitOptions
{
    Freeze freeze;
    std::optional<FitResult> init;  // single start from here instead of the multi-start set
    std::vector<double> weights;    // per-sample weights on residuals; empty = uniform
    int max_iterations = 500;
};

// Throws std::invalid_argument when more parameters are free than samples - 1.
FitResult fit_spectrum(const Spectrum& s, const FitOptions& options = {});

}  // namespace fanocoh

#endif  // FANOCOH_FIT_HPP
