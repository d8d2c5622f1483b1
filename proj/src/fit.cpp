#include "fanocoh/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <ceres/ceres.h>

#include "fanocoh/empirical.hpp"

namespace fanocoh
{

namespace
{

enum Param
{
    kQ = 0,
    kG = 1,
    kScale = 2,
    kBaseline = 3,
};

constexpr std::array<const char*, 4> param_names{"q", "g", "scale", "baseline"};
constexpr double min_scale = 1e-12;

// Model value and its gradient with respect to (q, g, scale, baseline).
double model(double eps, const std::array<double, 4>& p, double* grad)
{
    const double q = p[kQ], g = p[kG], s = p[kScale], b = p[kBaseline];
    const double e2 = 1.0 + eps * eps;
    const double q2 = 1.0 + q * q;
    const double num = eps * eps + q * q + 2.0 * q * eps * g + 2.0 * (1.0 - g);
    const double intensity = num / (e2 * q2);
    if (grad)
    {
        grad[kQ] = s * ((2.0 * q + 2.0 * eps * g) * q2 - 2.0 * q * num) / (e2 * q2 * q2);
        grad[kG] = s * (2.0 * q * eps - 2.0) / (e2 * q2);
        grad[kScale] = intensity;
        grad[kBaseline] = 1.0;
    }
    return s * intensity + b;
}

class SpectrumCost final : public ceres::CostFunction
{
public:
    SpectrumCost(std::span<const double> eps, std::span<const double> y, std::span<const double> w)
        : eps_(eps), y_(y), w_(w)
    {
        set_num_residuals(static_cast<int>(eps.size()));
        for (int k = 0; k < 4; ++k)
            mutable_parameter_block_sizes()->push_back(1);
    }

    bool Evaluate(double const* const* parameters, double* residuals, double** jacobians) const override
    {
        const std::array<double, 4> p{parameters[0][0], parameters[1][0], parameters[2][0], parameters[3][0]};
        double grad[4];
        for (std::size_t i = 0; i < eps_.size(); ++i)
        {
            const double w = w_.empty() ? 1.0 : w_[i];
            residuals[i] = w * (model(eps_[i], p, grad) - y_[i]);
            if (jacobians)
                for (int k = 0; k < 4; ++k)
                    if (jacobians[k])
                        jacobians[k][i] = w * grad[k];
        }
        return true;
    }

private:
    std::span<const double> eps_;
    std::span<const double> y_;
    std::span<const double> w_;
};

struct Run
{
    std::array<double, 4> p{};
    double rss = 0.0;
    bool converged = false;
    int iterations = 0;
    std::string message;
};

double weighted_rss(const Spectrum& s, std::span<const double> w, const std::array<double, 4>& p)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        const double wi = w.empty() ? 1.0 : w[i];
        const double r = wi * (model(s.epsilon()[i], p, nullptr) - s.intensity()[i]);
        acc += r * r;
    }
    return acc;
}

// Best scale and baseline for fixed (q, g), respecting frozen values and bounds.
void linear_start(const Spectrum& s, std::span<const double> w, const Freeze& freeze, std::array<double, 4>& p)
{
    double sii = 0, si = 0, s1 = 0, siy = 0, sy = 0;
    const FanoParams fp(p[kQ], p[kG]);
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        const double wi = w.empty() ? 1.0 : w[i] * w[i];
        const double in = fano_intensity(Detuning(s.epsilon()[i]), fp);
        const double y = s.intensity()[i];
        sii += wi * in * in;
        si += wi * in;
        s1 += wi;
        siy += wi * in * y;
        sy += wi * y;
    }
    if (!freeze.scale && !freeze.baseline)
    {
        const double det = sii * s1 - si * si;
        if (det > 0.0)
        {
            p[kScale] = (siy * s1 - si * sy) / det;
            p[kBaseline] = (sii * sy - si * siy) / det;
        }
    }
    else if (!freeze.scale)
        p[kScale] = (siy - p[kBaseline] * si) / sii;
    else if (!freeze.baseline)
        p[kBaseline] = (sy - p[kScale] * si) / s1;
    p[kScale] = std::max(p[kScale], 1e-3);
    p[kBaseline] = std::max(p[kBaseline], 0.0);
}

Run solve(const Spectrum& s, std::span<const double> w, const Freeze& freeze, std::array<double, 4> start,
          int max_iterations)
{
    Run run;
    run.p = start;
    ceres::Problem::Options popts;
    popts.cost_function_ownership = ceres::TAKE_OWNERSHIP;
    ceres::Problem problem(popts);
    problem.AddResidualBlock(new SpectrumCost(s.epsilon(), s.intensity(), w), nullptr, &run.p[kQ], &run.p[kG],
                             &run.p[kScale], &run.p[kBaseline]);

    const std::array<bool, 4> frozen{freeze.q.has_value(), freeze.g.has_value(), freeze.scale.has_value(),
                                     freeze.baseline.has_value()};
    for (int k = 0; k < 4; ++k)
        if (frozen[k])
            problem.SetParameterBlockConstant(&run.p[k]);
    if (!frozen[kG])
    {
        problem.SetParameterLowerBound(&run.p[kG], 0, 0.0);
        problem.SetParameterUpperBound(&run.p[kG], 0, 1.0);
    }
    if (!frozen[kScale])
        problem.SetParameterLowerBound(&run.p[kScale], 0, min_scale);
    if (!frozen[kBaseline])
        problem.SetParameterLowerBound(&run.p[kBaseline], 0, 0.0);

    ceres::Solver::Options opts;
    opts.minimizer_type = ceres::TRUST_REGION;
    opts.trust_region_strategy_type = ceres::LEVENBERG_MARQUARDT;
    opts.linear_solver_type = ceres::DENSE_QR;
    opts.max_num_iterations = max_iterations;
    opts.function_tolerance = 1e-15;
    opts.gradient_tolerance = 1e-22;
    opts.parameter_tolerance = 1e-15;
    opts.logging_type = ceres::SILENT;
    opts.minimizer_progress_to_stdout = false;
    opts.num_threads = 1;

    ceres::Solver::Summary summary;
    ceres::Solve(opts, &problem, &summary);
    run.converged = summary.termination_type == ceres::CONVERGENCE;
    run.iterations = static_cast<int>(summary.iterations.size());
    run.message = summary.message;
    run.rss = weighted_rss(s, w, run.p);
    return run;
}

}  // namespace

std::size_t Freeze::count() const
{
    return static_cast<std::size_t>(q.has_value()) + g.has_value() + scale.has_value() + baseline.has_value();
}

std::vector<std::string> Freeze::names() const
{
    std::vector<std::string> out;
    if (q)
        out.emplace_back(param_names[kQ]);
    if (g)
        out.emplace_back(param_names[kG]);
    if (scale)
        out.emplace_back(param_names[kScale]);
    if (baseline)
        out.emplace_back(param_names[kBaseline]);
    return out;
}

FitResult fit_spectrum(const Spectrum& s, const FitOptions& options)
{
    const Freeze& fz = options.freeze;
    const std::size_t n_free = 4 - fz.count();
    if (s.size() < 2 || n_free > s.size() - 1)
        throw std::invalid_argument("fit_spectrum: " + std::to_string(n_free) + " free parameters need at least " +
                                    std::to_string(n_free + 1) + " samples");
    if (!options.weights.empty() && options.weights.size() != s.size())
        throw std::invalid_argument("fit_spectrum: weights length differs from spectrum");
    if (fz.q && !std::isfinite(*fz.q))
        throw std::invalid_argument("fit_spectrum: frozen q must be finite");
    if (fz.g && !(*fz.g >= 0.0 && *fz.g <= 1.0))
        throw std::invalid_argument("fit_spectrum: frozen g must lie in [0, 1]");
    if (fz.scale && !(*fz.scale > 0.0))
        throw std::invalid_argument("fit_spectrum: frozen scale must be positive");
    if (fz.baseline && !(*fz.baseline >= 0.0))
        throw std::invalid_argument("fit_spectrum: frozen baseline must be nonnegative");

    const std::span<const double> w = options.weights;
    auto apply_frozen = [&](std::array<double, 4>& p) {
        if (fz.q)
            p[kQ] = *fz.q;
        if (fz.g)
            p[kG] = *fz.g;
        if (fz.scale)
            p[kScale] = *fz.scale;
        if (fz.baseline)
            p[kBaseline] = *fz.baseline;
    };

    std::vector<std::array<double, 4>> starts;
    if (options.init)
    {
        const FitResult& in = *options.init;
        std::array<double, 4> p{in.params.q(), in.params.g(), std::max(in.scale, min_scale),
                                std::max(in.baseline, 0.0)};
        apply_frozen(p);
        starts.push_back(p);
    }
    else
    {
        // |q| from the asymmetry peak position, eps0^2 = 2 (1 - g) + q^2.
        double eps0 = 1.0;
        try
        {
            const AsymmetryCurve curve = empirical_asymmetry(s);
            const LineshapeFit lf = fit_asymmetry_lineshape(curve.epsilon, curve.difference, curve.sum);
            if (lf.amplitude != 0.0 && !lf.at_boundary)
                eps0 = lf.eps0;
        }
        catch (const std::invalid_argument&)
        {
        }
        for (double sign : {1.0, -1.0})
        {
            for (double g0 : {0.3, 0.7, 1.0})
            {
                std::array<double, 4> p{sign * std::sqrt(std::max(eps0 * eps0 - 2.0 + 2.0 * g0, 0.04)), g0, 1.0, 0.0};
                apply_frozen(p);
                linear_start(s, w, fz, p);
                apply_frozen(p);
                starts.push_back(p);
            }
        }
    }

    Run best;
    bool have = false;
    for (const auto& start : starts)
    {
        Run run = n_free == 0 ? Run{start, weighted_rss(s, w, start), true, 0, "all parameters frozen"}
                              : solve(s, w, fz, start, options.max_iterations);
        if (!have || (run.converged && !best.converged) || (run.converged == best.converged && run.rss < best.rss))
        {
            best = std::move(run);
            have = true;
        }
    }

    FitResult r;
    r.params = FanoParams(best.p[kQ], std::clamp(best.p[kG], 0.0, 1.0));
    r.scale = best.p[kScale];
    r.baseline = best.p[kBaseline];
    r.rss = best.rss;
    r.converged = best.converged;
    r.iterations = best.iterations;
    r.message = best.message;
    r.frozen = fz.names();
    r.non_identifiable = n_free == 4;

    // Covariance sigma^2 (J^T J)^+ on the free subspace.
    std::vector<int> free_idx;
    for (int k = 0; k < 4; ++k)
    {
        const bool frozen = (k == kQ && fz.q) || (k == kG && fz.g) || (k == kScale && fz.scale) ||
                            (k == kBaseline && fz.baseline);
        if (!frozen)
            free_idx.push_back(k);
    }
    if (!free_idx.empty())
    {
        const auto m = static_cast<Eigen::Index>(free_idx.size());
        Eigen::MatrixXd jac(static_cast<Eigen::Index>(s.size()), m);
        double grad[4];
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            model(s.epsilon()[i], best.p, grad);
            const double wi = w.empty() ? 1.0 : w[i];
            for (Eigen::Index c = 0; c < m; ++c)
                jac(static_cast<Eigen::Index>(i), c) = wi * grad[free_idx[static_cast<std::size_t>(c)]];
        }
        const Eigen::VectorXd norms = jac.colwise().norm().transpose().cwiseMax(1e-300);
        const Eigen::MatrixXd scaled = jac * norms.cwiseInverse().asDiagonal();
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled.transpose() * scaled);
        const Eigen::VectorXd lambda = eig.eigenvalues();
        const double top = lambda.maxCoeff();
        r.rank_deficient = !(lambda.minCoeff() > 1e-10 * top);

        Eigen::VectorXd inv = Eigen::VectorXd::Zero(m);
        for (Eigen::Index k = 0; k < m; ++k)
            if (lambda(k) > 1e-12 * top)
                inv(k) = 1.0 / lambda(k);
        const Eigen::MatrixXd pinv_scaled = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
        const Eigen::MatrixXd pinv = norms.cwiseInverse().asDiagonal() * pinv_scaled * norms.cwiseInverse().asDiagonal();
        const double dof = static_cast<double>(s.size()) - static_cast<double>(m);
        const double sigma2 = best.rss / dof;
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b)
                r.covariance(free_idx[static_cast<std::size_t>(a)], free_idx[static_cast<std::size_t>(b)]) =
                    sigma2 * pinv(a, b);
    }
    return r;
}

}  // namespace fanocoh
