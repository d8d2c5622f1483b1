#include "fanocoh/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fanocoh/io.hpp"
#include "fanocoh/model.hpp"
#include "fanocoh/spectrum.hpp"
#include "fanocoh/visibility.hpp"

namespace fanocoh::cli
{

namespace
{

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Compact label form of a parameter value, e.g. "0.25".
std::string label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string toml_value(double v)
{
    std::string s = io::format_double(v);
    if (s.find_first_of(".eEn") == std::string::npos)
        s += ".0";
    return s;
}

std::string toml_value(const std::string& s)
{
    return "\"" + s + "\"";
}

std::string toml_value(const std::vector<double>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + toml_value(v[i]);
    return s + "]";
}

std::string toml_value(const std::vector<std::string>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + toml_value(v[i]);
    return s + "]";
}

template <typename T>
void toml_line(std::string& body, const std::string& key, const T& value)
{
    body += key + " = " + toml_value(value) + "\n";
}

void toml_int(std::string& body, const std::string& key, std::uint64_t value)
{
    body += key + " = " + std::to_string(value) + "\n";
}

json optional_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

void write_config(const GlobalConfig& global, const std::string& command, const std::string& body)
{
    io::write_text(global.out / (command + ".config.toml"), config_toml(global, command, body));
}

void write_plot(const fs::path& path, const io::Plot& plot)
{
    io::write_text(path, io::render_svg(plot));
}

std::vector<double> column(const io::Table& t, std::size_t c)
{
    std::vector<double> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows)
        out.push_back(row[c]);
    return out;
}

// Series per non-x column of a wide table.
io::Plot wide_plot(const io::Table& t, std::string title, std::string xlabel, std::string ylabel)
{
    io::Plot plot{std::move(title), std::move(xlabel), std::move(ylabel), {}, {}, {}};
    const auto x = column(t, 0);
    for (std::size_t c = 1; c < t.columns.size(); ++c)
        plot.series.push_back({t.columns[c], x, column(t, c), false, false});
    return plot;
}

const std::vector<double> figure_g_values{0.0, 0.25, 0.5, 0.75, 1.0};

void figure_1c(const fs::path& out, std::vector<fs::path>& written)
{
    const ChannelIntensities balanced(0.5, 0.5);
    io::Table t;
    t.columns.push_back("phi");
    for (double g : figure_g_values)
        t.columns.push_back("g=" + label(g));
    for (double phi : linspace(0.0, 4.0 * std::numbers::pi, 801))
    {
        std::vector<double> row{phi};
        for (double g : figure_g_values)
            row.push_back(mzi_intensity(phi, balanced, g));
        t.rows.push_back(std::move(row));
    }
    io::write_text(out / "fig1c.csv", io::table_csv(t));
    write_plot(out / "fig1c.svg", wide_plot(t, "MZI interference signal", "phi", "I"));
    written.push_back(out / "fig1c.csv");
    written.push_back(out / "fig1c.svg");
}

void figure_1d(const fs::path& out, std::vector<fs::path>& written)
{
    constexpr double q = -1.5;
    io::Table t;
    t.columns.push_back("epsilon");
    for (double g : figure_g_values)
        t.columns.push_back("g=" + label(g));
    for (double eps : linspace(-8.0, 8.0, 1601))
    {
        std::vector<double> row{eps};
        for (double g : figure_g_values)
            row.push_back(fano_intensity(Detuning(eps), FanoParams(q, g)));
        t.rows.push_back(std::move(row));
    }
    io::write_text(out / "fig1d.csv", io::table_csv(t));
    write_plot(out / "fig1d.svg", wide_plot(t, "Fano spectra, q = -1.5", "epsilon", "I"));
    written.push_back(out / "fig1d.csv");
    written.push_back(out / "fig1d.svg");
}

void figure_1e(const fs::path& out, const FiguresConfig& cfg, std::vector<fs::path>& written)
{
    const Window window{-cfg.window, cfg.window};
    const ChannelIntensities balanced(0.5, 0.5);
    io::Table t;
    t.columns = {"g", "V_MZI"};
    for (double q : cfg.q_list)
        t.columns.push_back("V_q=" + label(q));
    for (double g : linspace(0.0, 1.0, 101))
    {
        std::vector<double> row{g, mzi_visibility(balanced, g).value_or(0.0)};
        for (double q : cfg.q_list)
            row.push_back(fano_visibility(FanoParams(q, g), window).v);
        t.rows.push_back(std::move(row));
    }
    io::write_text(out / "fig1e.csv", io::table_csv(t));
    io::Plot plot = wide_plot(t, "Visibility vs coherence", "g", "V");
    plot.series.front().dashed = true;
    plot.yrange = std::pair{0.0, 1.0};
    write_plot(out / "fig1e.svg", plot);
    written.push_back(out / "fig1e.csv");
    written.push_back(out / "fig1e.svg");
}

constexpr double fig2_g = 0.8;
const std::vector<double> fig2_q{0.5, 3.0};

io::Table asymmetry_dots()
{
    io::Table dots;
    dots.columns = {"q", "eps0", "a_max"};
    for (double q : fig2_q)
    {
        const AsymmetryPeak pk = asymmetry_peak(FanoParams(q, fig2_g));
        dots.rows.push_back({q, pk.eps0, pk.a_max});
    }
    return dots;
}

void figure_2(const fs::path& out, std::vector<fs::path>& written)
{
    io::Table t;
    t.columns.push_back("epsilon");
    for (double q : fig2_q)
        t.columns.push_back("A_q=" + label(q));
    for (double eps : linspace(0.0, 10.0, 1001))
    {
        std::vector<double> row{eps};
        for (double q : fig2_q)
            row.push_back(asymmetry(Detuning(eps), FanoParams(q, fig2_g)));
        t.rows.push_back(std::move(row));
    }

    io::Table locus;
    locus.columns = {"q", "eps0", "a_max"};
    for (int k = 0; k < 200; ++k)
    {
        const double q = std::pow(10.0, -2.0 + 3.5 * k / 199.0);
        const AsymmetryPeak pk = asymmetry_peak(FanoParams(q, fig2_g));
        locus.rows.push_back({q, pk.eps0, pk.a_max});
    }
    const io::Table dots = asymmetry_dots();

    io::write_text(out / "fig2.csv", io::table_csv(t));
    io::write_text(out / "fig2_locus.csv", io::table_csv(locus));
    io::write_text(out / "fig2_dots.csv", io::table_csv(dots));

    io::Plot plot = wide_plot(t, "Asymmetry parameter, g = 0.8", "epsilon", "A");
    plot.series.push_back({"peak locus", column(locus, 1), column(locus, 2), false, true});
    plot.series.push_back({"peaks", column(dots, 1), column(dots, 2), true, false});
    plot.series.push_back({"g", {0.0, 10.0}, {fig2_g, fig2_g}, false, true});
    plot.xrange = std::pair{0.0, 10.0};
    plot.yrange = std::pair{0.0, 1.0};
    write_plot(out / "fig2.svg", plot);
    for (const char* f : {"fig2.csv", "fig2_locus.csv", "fig2_dots.csv", "fig2.svg"})
        written.push_back(out / f);
}

void figure_3(const fs::path& out, const FiguresConfig& cfg, std::vector<fs::path>& written)
{
    if (!(cfg.fig3_eps0_step > 0.0) || !(cfg.fig3_amax_step > 0.0) || !(cfg.fig3_eps0_max > cfg.fig3_eps0_step))
        throw std::invalid_argument("figure 3: grid steps must be positive");
    const auto n_eps = static_cast<std::size_t>(std::floor(cfg.fig3_eps0_max / cfg.fig3_eps0_step + 1e-9));
    const auto n_a = static_cast<std::size_t>(std::floor(1.0 / cfg.fig3_amax_step + 1e-9));

    io::Table grid;
    grid.columns = {"eps0", "a_max", "g"};
    std::vector<std::vector<double>> g_of(n_eps, std::vector<double>(n_a));
    for (std::size_t i = 0; i < n_eps; ++i)
    {
        const double eps0 = cfg.fig3_eps0_step * static_cast<double>(i + 1);
        for (std::size_t j = 0; j < n_a; ++j)
        {
            const double a = j + 1 == n_a ? 1.0 : cfg.fig3_amax_step * static_cast<double>(j + 1);
            const double g = coherence_exact(AsymmetryPeak{eps0, a, false}).exact.value_or(0.0);
            g_of[i][j] = g;
            grid.rows.push_back({eps0, a, g});
        }
    }

    // Per eps0 column, g grows with a_max; interpolate each level crossing.
    io::Table contours;
    contours.columns = {"level", "eps0", "a_max"};
    io::Plot plot{"Coherence from asymmetry peak", "eps0", "A_max", {}, std::pair{0.0, cfg.fig3_eps0_max},
                  std::pair{0.0, 1.0}};
    for (int l = 1; l <= 9; ++l)
    {
        const double level = l / 10.0;
        io::Series series{"g=" + label(level), {}, {}, false, l == 8};
        for (std::size_t i = 0; i < n_eps; ++i)
        {
            const auto& col = g_of[i];
            for (std::size_t j = 0; j + 1 < n_a; ++j)
            {
                if (col[j] < level && col[j + 1] >= level)
                {
                    const double a0 = cfg.fig3_amax_step * static_cast<double>(j + 1);
                    const double a1 = j + 2 == n_a ? 1.0 : cfg.fig3_amax_step * static_cast<double>(j + 2);
                    const double a = a0 + (level - col[j]) / (col[j + 1] - col[j]) * (a1 - a0);
                    const double eps0 = cfg.fig3_eps0_step * static_cast<double>(i + 1);
                    contours.rows.push_back({level, eps0, a});
                    series.x.push_back(eps0);
                    series.y.push_back(a);
                    break;
                }
            }
        }
        plot.series.push_back(std::move(series));
    }
    const io::Table dots = asymmetry_dots();
    plot.series.push_back({"peaks g=0.8", column(dots, 1), column(dots, 2), true, false});

    io::write_text(out / "fig3.csv", io::table_csv(grid));
    io::write_text(out / "fig3_contours.csv", io::table_csv(contours));
    io::write_text(out / "fig3_dots.csv", io::table_csv(dots));
    write_plot(out / "fig3.svg", plot);
    for (const char* f : {"fig3.csv", "fig3_contours.csv", "fig3_dots.csv", "fig3.svg"})
        written.push_back(out / f);
}

std::string report_text(const AnalyzeConfig& cfg, const CoherenceReport& r)
{
    std::ostringstream o;
    auto num = [](const std::optional<double>& v) { return v ? io::format_double(*v) : std::string("n/a"); };
    o << "input:              " << cfg.input.string() << "\n";
    o << "peak method:        " << cfg.method << "\n";
    o << "peak eps0:          " << io::format_double(r.estimate_peak.eps0) << "\n";
    o << "peak A_max:         " << io::format_double(r.estimate_peak.a_max) << "\n";
    o << "lower bound on g:   " << io::format_double(r.estimate.lower_bound) << " +- "
      << num(r.estimate.lower_bound_sigma) << "\n";
    o << "exact g:            " << num(r.estimate.exact) << " +- " << num(r.estimate.exact_sigma) << "\n";
    o << "exact g 95% CI:     [" << num(r.exact_ci_lo) << ", " << num(r.exact_ci_hi) << "]\n";
    o << "inversion:          " << to_string(r.estimate.method) << " (cubic residual "
      << io::format_double(r.estimate.residual) << ", closed form " << num(r.estimate.closed_form) << ")\n";
    o << "bound, eps x " << label(cfg.axis_rescale) << ":   " << io::format_double(r.bound_rescaled) << "\n";
    o << "bootstrap:          " << r.bootstrap_used << " / " << r.bootstrap_requested << " replicates\n";
    o << "flags:              ";
    const auto flags = r.flags.names();
    if (flags.empty())
        o << "none";
    for (std::size_t i = 0; i < flags.size(); ++i)
        o << (i ? ", " : "") << flags[i];
    o << "\n";
    if (r.flags.exact_unreliable)
        o << "note: exact unreliable; the spectrum is inconsistent with the expected scale (baseline?)\n";
    return o.str();
}

}  // namespace

std::string config_toml(const GlobalConfig& global, const std::string& command, const std::string& body)
{
    std::string out;
    toml_int(out, "seed", global.seed);
    toml_line(out, "out", global.out.string());
    out += "\n[" + command + "]\n" + body;
    return out;
}

std::vector<fs::path> cmd_synth(const GlobalConfig& global, const SynthConfig& cfg)
{
    if (cfg.g.empty())
        throw std::invalid_argument("synth: at least one g value required");
    const std::vector<double> grid = linspace(cfg.eps_min, cfg.eps_max, cfg.points);

    std::vector<fs::path> written;
    for (std::size_t k = 0; k < cfg.g.size(); ++k)
    {
        NoiseModel noise;
        const std::uint64_t seed = stream_seed(global.seed, k);
        if (cfg.noise == "gaussian")
            noise = NoiseModel::gaussian(cfg.sigma, seed);
        else if (cfg.noise == "poisson")
            noise = NoiseModel::poisson(cfg.counts, seed);
        else if (cfg.noise != "none")
            throw std::invalid_argument("synth: unknown noise kind '" + cfg.noise + "'");

        const Spectrum s = synth_spectrum(FanoParams(cfg.q, cfg.g[k]), cfg.scale, cfg.baseline, grid, noise);
        const std::string name = cfg.g.size() == 1 ? cfg.name : cfg.name + "_g" + label(cfg.g[k]);
        io::write_spectrum_csv(s, global.out / (name + ".csv"));
        json meta(s.meta());
        io::write_text(global.out / (name + ".meta.json"), meta.dump(2) + "\n");
        written.push_back(global.out / (name + ".csv"));
    }

    std::string body;
    toml_line(body, "q", cfg.q);
    toml_line(body, "g", cfg.g);
    toml_line(body, "scale", cfg.scale);
    toml_line(body, "baseline", cfg.baseline);
    toml_line(body, "eps-min", cfg.eps_min);
    toml_line(body, "eps-max", cfg.eps_max);
    toml_int(body, "points", cfg.points);
    toml_line(body, "noise", cfg.noise);
    toml_line(body, "sigma", cfg.sigma);
    toml_line(body, "counts", cfg.counts);
    toml_line(body, "name", cfg.name);
    write_config(global, "synth", body);
    return written;
}

AnalyzeOutcome cmd_analyze(const GlobalConfig& global, const AnalyzeConfig& cfg)
{
    const Spectrum s = io::read_spectrum_csv(cfg.input);

    EstimateOptions opts;
    if (cfg.method == "lineshape")
        opts.method = PeakMethod::lineshape_fit;
    else if (cfg.method == "quadratic")
        opts.method = PeakMethod::local_quadratic;
    else
        throw std::invalid_argument("analyze: unknown method '" + cfg.method + "'");
    opts.bootstrap = cfg.bootstrap;
    opts.seed = global.seed;
    opts.axis_rescale = cfg.axis_rescale;
    opts.expected_scale = cfg.free_scale ? std::nullopt : std::optional<double>(cfg.expected_scale);

    AnalyzeOutcome outcome;
    outcome.report = estimate_coherence(s, opts);
    const CoherenceReport& r = outcome.report;
    outcome.exit_code = r.flags.any() ? exit_quality : exit_ok;

    io::Table curve;
    curve.columns = {"epsilon", "asymmetry", "difference", "sum"};
    for (std::size_t i = 0; i < r.curve.epsilon.size(); ++i)
        curve.rows.push_back({r.curve.epsilon[i], r.curve.value[i], r.curve.difference[i], r.curve.sum[i]});
    io::write_text(global.out / "asymmetry.csv", io::table_csv(curve));

    json j;
    j["input"] = {{"source", s.meta().at("source")}, {"checksum", s.meta().at("checksum")}, {"samples", s.size()}};
    j["method"] = cfg.method;
    j["lower_bound"] = r.estimate.lower_bound;
    j["lower_bound_sigma"] = optional_json(r.estimate.lower_bound_sigma);
    j["exact"] = optional_json(r.estimate.exact);
    j["exact_sigma"] = optional_json(r.estimate.exact_sigma);
    j["exact_ci"] = {optional_json(r.exact_ci_lo), optional_json(r.exact_ci_hi)};
    j["inversion"] = {{"method", to_string(r.estimate.method)},
                      {"cubic_residual", r.estimate.residual},
                      {"closed_form", optional_json(r.estimate.closed_form)}};
    j["peak"] = {{"eps0", r.estimate_peak.eps0},
                 {"a_max", r.estimate_peak.a_max},
                 {"degenerate", r.estimate_peak.degenerate}};
    j["argmax"] = {{"eps", r.peak.raw_eps},
                   {"value", r.peak.raw_value},
                   {"refined_eps0", r.peak.peak.eps0},
                   {"refined_a_max", r.peak.peak.a_max},
                   {"curvature", r.peak.curvature},
                   {"at_boundary", r.peak.at_boundary}};
    j["axis_rescale"] = {{"factor", cfg.axis_rescale}, {"lower_bound", r.bound_rescaled}};
    j["q_hat"] = optional_json(r.q_hat);
    j["model_misfit_rms"] = optional_json(r.model_misfit_rms);
    j["noise_rms"] = r.noise_rms;
    j["bootstrap"] = {{"requested", r.bootstrap_requested}, {"used", r.bootstrap_used}, {"seed", global.seed}};
    j["curve"] = {{"points", r.curve.epsilon.size()},
                  {"dropped", r.curve.dropped},
                  {"interpolated", r.curve.interpolated},
                  {"interpolation_spread", r.curve.interpolation_spread}};
    j["flags"] = r.flags.names();
    io::write_text(global.out / "report.json", j.dump(2) + "\n");
    io::write_text(global.out / "report.txt", report_text(cfg, r));

    std::string body;
    toml_line(body, "input", cfg.input.string());
    toml_line(body, "method", cfg.method);
    toml_int(body, "bootstrap", cfg.bootstrap);
    toml_line(body, "axis-rescale", cfg.axis_rescale);
    toml_line(body, "expected-scale", cfg.expected_scale);
    body += std::string("free-scale = ") + (cfg.free_scale ? "true" : "false") + "\n";
    write_config(global, "analyze", body);
    return outcome;
}

FitOutcome cmd_fit(const GlobalConfig& global, const FitConfig& cfg)
{
    const Spectrum s = io::read_spectrum_csv(cfg.input);
    FitOptions opts;
    opts.freeze = {cfg.freeze_q, cfg.freeze_g, cfg.freeze_scale, cfg.freeze_baseline};
    opts.max_iterations = cfg.max_iterations;

    FitOutcome outcome;
    outcome.result = fit_spectrum(s, opts);
    const FitResult& r = outcome.result;
    if (!r.converged)
        outcome.exit_code = exit_not_converged;
    else if (r.non_identifiable)
        outcome.exit_code = exit_quality;

    json cov = json::array();
    for (int a = 0; a < 4; ++a)
    {
        json row = json::array();
        for (int b = 0; b < 4; ++b)
            row.push_back(r.covariance(a, b));
        cov.push_back(row);
    }
    json j;
    j["input"] = {{"source", s.meta().at("source")}, {"checksum", s.meta().at("checksum")}, {"samples", s.size()}};
    j["q"] = r.params.q();
    j["g"] = r.params.g();
    j["scale"] = r.scale;
    j["baseline"] = r.baseline;
    j["rss"] = r.rss;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["frozen"] = r.frozen;
    j["non_identifiable"] = r.non_identifiable;
    j["rank_deficient"] = r.rank_deficient;
    j["covariance_order"] = {"q", "g", "scale", "baseline"};
    j["covariance"] = cov;
    j["solver_message"] = r.message;
    io::write_text(global.out / "fit.json", j.dump(2) + "\n");

    std::ostringstream t;
    t << "q         = " << io::format_double(r.params.q()) << "\n"
      << "g         = " << io::format_double(r.params.g()) << "\n"
      << "scale     = " << io::format_double(r.scale) << "\n"
      << "baseline  = " << io::format_double(r.baseline) << "\n"
      << "rss       = " << io::format_double(r.rss) << "\n"
      << "converged = " << (r.converged ? "yes" : "no") << "\n";
    if (r.non_identifiable)
        t << "warning: q, g, scale and baseline all free; the mimicry identity makes them non-identifiable."
          << " Freeze one (e.g. --freeze-q) to restore identifiability.\n";
    io::write_text(global.out / "fit.txt", t.str());

    std::string body;
    toml_line(body, "input", cfg.input.string());
    if (cfg.freeze_q)
        toml_line(body, "freeze-q", *cfg.freeze_q);
    if (cfg.freeze_g)
        toml_line(body, "freeze-g", *cfg.freeze_g);
    if (cfg.freeze_scale)
        toml_line(body, "freeze-scale", *cfg.freeze_scale);
    if (cfg.freeze_baseline)
        toml_line(body, "freeze-baseline", *cfg.freeze_baseline);
    toml_int(body, "max-iterations", static_cast<std::uint64_t>(cfg.max_iterations));
    write_config(global, "fit", body);
    return outcome;
}

std::vector<fs::path> cmd_figures(const GlobalConfig& global, const FiguresConfig& cfg)
{
    std::vector<fs::path> written;
    for (const auto& which : cfg.which)
    {
        if (which == "1c")
            figure_1c(global.out, written);
        else if (which == "1d")
            figure_1d(global.out, written);
        else if (which == "1e")
            figure_1e(global.out, cfg, written);
        else if (which == "2")
            figure_2(global.out, written);
        else if (which == "3")
            figure_3(global.out, cfg, written);
        else
            throw std::invalid_argument("figures: unknown figure '" + which + "' (expected 1c, 1d, 1e, 2, 3)");
    }

    std::string body;
    toml_line(body, "which", cfg.which);
    toml_line(body, "q-list", cfg.q_list);
    toml_line(body, "window", cfg.window);
    toml_line(body, "fig3-eps0-max", cfg.fig3_eps0_max);
    toml_line(body, "fig3-eps0-step", cfg.fig3_eps0_step);
    toml_line(body, "fig3-amax-step", cfg.fig3_amax_step);
    write_config(global, "figures", body);
    return written;
}

MimicOutcome cmd_mimic(const GlobalConfig& global, const MimicConfig& cfg)
{
    MimicOutcome outcome;
    outcome.map = mimicry_map(cfg.q, cfg.g);
    const MimicryMap& m = outcome.map;
    const FanoParams partial(cfg.q, cfg.g);
    const FanoParams coherent(m.q_prime, 1.0);
    for (double eps : linspace(-cfg.window, cfg.window, cfg.points))
    {
        const Detuning d(eps);
        outcome.residual = std::max(outcome.residual,
                                    std::abs(m.alpha * (m.beta + fano_intensity(d, partial)) - fano_intensity(d, coherent)));
    }

    json j;
    j["q"] = cfg.q;
    j["g"] = cfg.g;
    j["alpha"] = m.alpha;
    j["beta"] = m.beta;
    j["q_prime"] = m.q_prime;
    j["max_residual"] = outcome.residual;
    j["grid"] = {{"min", -cfg.window}, {"max", cfg.window}, {"points", cfg.points}};
    io::write_text(global.out / "mimic.json", j.dump(2) + "\n");

    std::string body;
    toml_line(body, "q", cfg.q);
    toml_line(body, "g", cfg.g);
    toml_int(body, "points", cfg.points);
    toml_line(body, "window", cfg.window);
    write_config(global, "mimic", body);
    return outcome;
}

int run(int argc, char** argv)
{
    CLI::App app{"Fano interferometer lineshapes, visibility and coherence from asymmetry"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML file with the same keys as the command-line flags");

    GlobalConfig global;
    app.add_option("--seed", global.seed, "Random seed")->capture_default_str();
    app.add_option("--out", global.out, "Output directory")->capture_default_str();

    SynthConfig synth;
    auto* s = app.add_subcommand("synth", "Synthesize Fano spectra as CSV");
    s->add_option("--q", synth.q, "Fano parameter")->capture_default_str();
    s->add_option("--g", synth.g, "Coherence value(s); one file per value")->capture_default_str();
    s->add_option("--scale", synth.scale)->capture_default_str();
    s->add_option("--baseline", synth.baseline)->capture_default_str();
    s->add_option("--eps-min", synth.eps_min)->capture_default_str();
    s->add_option("--eps-max", synth.eps_max)->capture_default_str();
    s->add_option("--points", synth.points)->capture_default_str();
    s->add_option("--noise", synth.noise)->check(CLI::IsMember({"none", "gaussian", "poisson"}))->capture_default_str();
    s->add_option("--sigma", synth.sigma, "Gaussian noise standard deviation")->capture_default_str();
    s->add_option("--counts", synth.counts, "Poisson counts per unit intensity")->capture_default_str();
    s->add_option("--name", synth.name, "Output file stem")->capture_default_str();

    AnalyzeConfig analyze;
    auto* a = app.add_subcommand("analyze", "Estimate coherence from a spectrum CSV");
    a->add_option("input,--input", analyze.input, "Spectrum CSV")->required();
    a->add_option("--method", analyze.method)->check(CLI::IsMember({"lineshape", "quadratic"}))->capture_default_str();
    a->add_option("--bootstrap", analyze.bootstrap, "Bootstrap replicates")->capture_default_str();
    a->add_option("--axis-rescale", analyze.axis_rescale)->capture_default_str();
    a->add_option("--expected-scale", analyze.expected_scale)->capture_default_str();
    a->add_flag("--free-scale", analyze.free_scale, "Spectrum scale unknown: skip the consistency check");

    FitConfig fit;
    double fq = 0, fg = 0, fs_ = 0, fb = 0;
    auto* f = app.add_subcommand("fit", "Least-squares fit of scale * I(eps; q, g) + baseline");
    f->add_option("input,--input", fit.input, "Spectrum CSV")->required();
    auto* oq = f->add_option("--freeze-q", fq, "Hold q at this value");
    auto* og = f->add_option("--freeze-g", fg, "Hold g at this value");
    auto* os = f->add_option("--freeze-scale", fs_, "Hold scale at this value");
    auto* ob = f->add_option("--freeze-baseline", fb, "Hold baseline at this value");
    f->add_option("--max-iterations", fit.max_iterations)->capture_default_str();

    FiguresConfig figures;
    auto* fig = app.add_subcommand("figures", "Regenerate figure data as CSV and SVG");
    fig->add_option("--which", figures.which)->capture_default_str();
    fig->add_option("--q-list", figures.q_list, "Fano parameters for the visibility curves")->capture_default_str();
    fig->add_option("--window", figures.window, "Half-width of the detuning window for visibility")->capture_default_str();
    fig->add_option("--fig3-eps0-max", figures.fig3_eps0_max)->capture_default_str();
    fig->add_option("--fig3-eps0-step", figures.fig3_eps0_step)->capture_default_str();
    fig->add_option("--fig3-amax-step", figures.fig3_amax_step)->capture_default_str();

    MimicConfig mimic;
    auto* m = app.add_subcommand("mimic", "Scale and baseline that make a g < 1 spectrum look fully coherent");
    m->add_option("--q", mimic.q)->capture_default_str();
    m->add_option("--g", mimic.g)->capture_default_str();
    m->add_option("--points", mimic.points)->capture_default_str();
    m->add_option("--window", mimic.window)->capture_default_str();

    for (auto* sub : {s, a, f, fig, m})
        sub->fallthrough();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e);
    }

    try
    {
        if (*s)
        {
            for (const auto& p : cmd_synth(global, synth))
                std::cout << "wrote " << p.string() << "\n";
            return exit_ok;
        }
        if (*a)
        {
            const AnalyzeOutcome o = cmd_analyze(global, analyze);
            std::cout << report_text(analyze, o.report);
            return o.exit_code;
        }
        if (*f)
        {
            if (*oq)
                fit.freeze_q = fq;
            if (*og)
                fit.freeze_g = fg;
            if (*os)
                fit.freeze_scale = fs_;
            if (*ob)
                fit.freeze_baseline = fb;
            const FitOutcome o = cmd_fit(global, fit);
            std::cout << io::read_text(global.out / "fit.txt");
            return o.exit_code;
        }
        if (*fig)
        {
            for (const auto& p : cmd_figures(global, figures))
                std::cout << "wrote " << p.string() << "\n";
            return exit_ok;
        }
        if (*m)
        {
            const MimicOutcome o = cmd_mimic(global, mimic);
            std::cout << "alpha    = " << io::format_double(o.map.alpha) << "\n"
                      << "beta     = " << io::format_double(o.map.beta) << "\n"
                      << "q'       = " << io::format_double(o.map.q_prime) << "\n"
                      << "residual = " << io::format_double(o.residual) << "\n";
            return o.exit_code;
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}

}  // namespace fanocoh::cli
