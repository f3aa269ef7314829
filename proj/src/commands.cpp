#include "zfk/commands.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "zfk/acceptance.hpp"
#include "zfk/asymptotics.hpp"
#include "zfk/charts.hpp"
#include "zfk/csv.hpp"
#include "zfk/error.hpp"
#include "zfk/model.hpp"
#include "zfk/pde.hpp"
#include "zfk/shooting.hpp"

namespace zfk::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Decimal literal -> double; anything else (expressions, trailing text) is a usage error.
double parse_decimal(const std::string& text, const char* what)
{
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw UsageError(std::string(what) + ": '" + text + "' is not a decimal number");
    return v;
}

/// Reads `key = value` files through CLI11, and JSON manifests written by this tool.
class ManifestAwareConfig : public CLI::ConfigINI {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override
    {
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || text[first] != '{') {
            std::istringstream again(text);
            return CLI::ConfigINI::from_config(again);
        }
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw CLI::ConversionError("config", std::string("invalid JSON manifest: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        auto emit = [&items](const json& obj, const std::vector<std::string>& parents) {
            if (!obj.is_object())
                return;
            for (const auto& [key, value] : obj.items()) {
                CLI::ConfigItem item;
                item.parents = parents;
                item.name = key;
                auto push = [&item](const json& v) {
                    if (v.is_boolean())
                        item.inputs.emplace_back(v.get<bool>() ? "true" : "false");
                    else if (v.is_number_integer())
                        item.inputs.push_back(std::to_string(v.get<long long>()));
                    else if (v.is_number())
                        item.inputs.push_back(format_double(v.get<double>()));
                    else if (v.is_string())
                        item.inputs.push_back(v.get<std::string>());
                };
                if (value.is_null())
                    continue;
                if (value.is_array()) {
                    for (const auto& v : value) push(v);
                    if (item.inputs.empty())
                        continue;
                } else {
                    push(value);
                }
                items.push_back(std::move(item));
            }
        };
        if (j.contains("parameters"))
            emit(j["parameters"], {});
        if (j.contains("command") && j.contains("command_parameters"))
            emit(j["command_parameters"], {j["command"].get<std::string>()});
        return items;
    }
};

struct Common {
    std::vector<std::string> eps;
    std::optional<std::string> c;
    std::string out = "zfk-out";
    int jobs = 1;
    bool force = false;
    std::string tol = "1e-10";
};

struct SeriesOpts {
    int K = 3;
};

struct ProfileOpts {
    std::string zmin = "-1e6";
    std::string zmax = "1e6";
};

struct PortraitOpts {
    int grid = 25;
};

struct PdeOpts {
    int N = 1001;
    std::string L = "10";
    std::string T = "4";
    std::string x0 = "3";
    std::string bc = "fixed";
    bool snapshots = false;
    bool step = false;
};

struct VerifyOpts {
    std::string inject = "none";
};

/// One command invocation: parameters, outputs and summary values for the manifest.
class Run {
public:
    Run(std::string command, const Common& common) : command_(std::move(command)), dir_(common.out)
    {
        fs::create_directories(dir_);
    }

    fs::path file(const std::string& name)
    {
        outputs_.push_back(name);
        return dir_ / name;
    }

    json parameters = json::object();
    json command_parameters = json::object();
    json results = json::object();

    void write_manifest() const
    {
        json m;
        m["tool"] = "zfk";
        m["version"] = std::string(version);
        m["command"] = command_;
        m["timestamp"] = timestamp();
        m["parameters"] = parameters;
        m["command_parameters"] = command_parameters;
        m["outputs"] = outputs_;
        m["results"] = results;
        std::ofstream f(dir_ / "manifest.json", std::ios::binary);
        f << m.dump(2) << '\n';
        if (!f)
            throw Error(ErrorCode::configuration, "cannot write " + (dir_ / "manifest.json").string());
    }

private:
    static std::string timestamp()
    {
        const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    std::string command_;
    fs::path dir_;
    std::vector<std::string> outputs_;
};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> eps_list(const Common& common)
{
    std::vector<double> v;
    for (const auto& s : common.eps) v.push_back(parse_decimal(s, "--eps"));
    return v;
}

double single_eps(const Common& common, double fallback)
{
    const auto v = eps_list(common);
    if (v.size() > 1)
        throw UsageError("this command takes a single --eps value");
    return v.empty() ? fallback : v.front();
}

void fill_common(Run& run, const Common& common, const json& eps)
{
    run.parameters["eps"] = eps;
    run.parameters["c"] = common.c ? json(parse_decimal(*common.c, "--c")) : json(nullptr);
    run.parameters["out"] = common.out;
    run.parameters["jobs"] = common.jobs;
    run.parameters["force"] = common.force;
    run.parameters["tol"] = parse_decimal(common.tol, "--tol");
}

ShootConfig shoot_config(const Common& common)
{
    ShootConfig cfg;
    cfg.root_tol = parse_decimal(common.tol, "--tol");
    if (!(cfg.root_tol > 0.0))
        throw UsageError("--tol must be positive");
    return cfg;
}

/// The requested speed, or cbar(eps) when --c is absent. Enforces c >= cbar - tol unless forced.
struct SpeedChoice {
    double c;
    double cbar;
};

SpeedChoice choose_speed(const Common& common, double eps, const ShootConfig& cfg)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (common.c && common.force)
        return {parse_decimal(*common.c, "--c"), nan};
    const double cbar = find_min_speed(eps, cfg).cbar;
    if (!common.c)
        return {cbar, cbar};
    const double c = parse_decimal(*common.c, "--c");
    if (c < cbar - cfg.root_tol)
        throw Error(ErrorCode::no_connection, "c = " + format_double(c) + " is below the minimal speed " +
                                                  format_double(cbar) + " (use --force to try anyway)");
    return {c, cbar};
}

int segment_code(Segment s) { return s == Segment::slow ? 0 : (s == Segment::fast ? 1 : 2); }

// --------------------------------------------------------------------------

int cmd_speed(const Common& common, std::ostream& out)
{
    const auto eps = eps_list(common);
    for (double e : eps)
        if (!(e > 0.0 && e <= 0.1))
            throw UsageError("speed: eps values must lie in (0, 0.1], got " + format_double(e));
    const ShootConfig cfg = shoot_config(common);

    struct Row {
        double cbar = std::numeric_limits<double>::quiet_NaN();
        double gap = std::numeric_limits<double>::quiet_NaN();
        double shift = std::numeric_limits<double>::quiet_NaN();
        long long iterations = 0;
        std::string error;
    };
    std::vector<Row> rows(eps.size());
    const auto n = static_cast<std::ptrdiff_t>(eps.size());
#pragma omp parallel for schedule(dynamic) num_threads(common.jobs)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        auto& row = rows[static_cast<std::size_t>(i)];
        try {
            const auto r = find_min_speed(eps[static_cast<std::size_t>(i)], cfg);
            row.cbar = r.cbar;
            row.gap = r.gap_at_root;
            row.shift = r.theta_shift;
            row.iterations = r.iterations;
        } catch (const Error& e) {
            row.error = std::string(to_string(e.code()));
        } catch (const std::exception&) {
            row.error = "internal";
        }
    }

    Run run("speed", common);
    fill_common(run, common, eps);
    CsvWriter w(run.file("speed.csv"), {"eps", "cbar", "cbar_linear", "gap_residual", "iterations", "slope", "theta_shift", "error"});
    std::size_t failures = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        w.cell(eps[i]).cell(r.cbar).cell(cbar_linear(eps[i])).cell(r.gap).cell(r.iterations);
        w.cell((r.cbar - 1.0) / eps[i]).cell(r.shift).cell(std::string_view(r.error));
        w.end_row();
        if (!r.error.empty())
            ++failures;
        out << "eps " << format_double(eps[i]) << ": "
            << (r.error.empty() ? "cbar " + format_double(r.cbar) : "failed (" + r.error + ")") << '\n';
    }
    run.results["rows"] = rows.size();
    run.results["failed_rows"] = failures;
    run.write_manifest();
    return failures == 0 ? success : computation_failure;
}

int cmd_profile(const Common& common, const ProfileOpts& opts, std::ostream& out)
{
    const double eps = single_eps(common, 0.01);
    if (!(eps > 0.0))
        throw UsageError("profile: eps must be positive");
    const double zmin = parse_decimal(opts.zmin, "--zmin"), zmax = parse_decimal(opts.zmax, "--zmax");
    if (!(zmin < 0.0 && zmax > 0.0))
        throw UsageError("profile: need zmin < 0 < zmax");
    const ShootConfig cfg = shoot_config(common);
    const auto speed = choose_speed(common, eps, cfg);
    const auto profile = build_profile(speed.c, eps, cfg, {zmin, zmax});

    Run run("profile", common);
    fill_common(run, common, json::array({eps}));
    run.command_parameters["zmin"] = zmin;
    run.command_parameters["zmax"] = zmax;
    CsvWriter w(run.file("profile.csv"), {"z", "theta", "eta", "segment"});
    std::set<int> present;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        w.cell(profile.z[i]).cell(profile.theta[i]).cell(profile.eta[i]).cell(static_cast<long long>(segment_code(profile.segments[i])));
        w.end_row();
        present.insert(segment_code(profile.segments[i]));
    }
    const auto defect = profile_defect(profile);
    run.results["c"] = speed.c;
    run.results["cbar"] = number_or_null(speed.cbar);
    run.results["samples"] = profile.size();
    run.results["segment_codes"] = {{"slow", 0}, {"fast", 1}, {"inner", 2}};
    run.results["segments"] = present;
    run.results["truncated"] = profile.truncated;
    run.results["near_minimal_regime"] = profile.near_minimal_regime;
    run.results["defect"] = std::max(defect.max_theta, defect.max_eta);
    run.write_manifest();
    out << "profile c = " << format_double(speed.c) << ", eps = " << format_double(eps) << ": " << profile.size()
        << " samples, " << present.size() << " segment(s)" << (profile.truncated ? ", truncated" : "") << '\n';
    return success;
}

int cmd_portrait(const Common& common, const PortraitOpts& opts, std::ostream& out)
{
    const double eps = single_eps(common, 0.01);
    if (eps < 0.0)
        throw UsageError("portrait: eps must be nonnegative");
    if (opts.grid < 2)
        throw UsageError("portrait: --grid must be at least 2");
    const double c = common.c ? parse_decimal(*common.c, "--c") : 1.5;
    const Params params{c, eps};
    const ShootConfig cfg = shoot_config(common);

    Run run("portrait", common);
    fill_common(run, common, json::array({eps}));
    run.parameters["c"] = c;
    run.command_parameters["grid"] = opts.grid;

    // Stable manifold of p+: inner-chart branch, then its continuation below the section.
    {
        CsvWriter w(run.file("stable_manifold.csv"), {"theta", "eta", "theta2"});
        const auto k2 = stable_branch_k2(params, cfg);
        for (const auto& s : k2.states) {
            w.cell(1.0 + eps * s[0]).cell(s[1]).cell(s[0]);
            w.end_row();
        }
        if (eps > 0.0) {
            const auto cont = stable_manifold_continuation(params, cfg);
            for (std::size_t i = 1; i < cont.states.size(); ++i) {
                const auto& s = cont.states[i];
                w.cell(s[0]).cell(s[1]).cell((s[0] - 1.0) / eps);
                w.end_row();
            }
        }
    }
    // Strong unstable manifold of p- (the graph eta = c theta at eps = 0).
    {
        CsvWriter w(run.file("unstable_manifold.csv"), {"theta", "eta"});
        if (eps > 0.0) {
            const auto tr = strong_unstable_branch(params, 1.0 - 2.0 * eps, cfg);
            for (const auto& s : tr.states) {
                w.cell(s[0]).cell(s[1]);
                w.end_row();
            }
        } else {
            for (int i = 0; i <= 200; ++i) {
                const double th = i / 200.0;
                w.cell(th).cell(c * th);
                w.end_row();
            }
        }
    }
    {
        CsvWriter w(run.file("separatrix.csv"), {"theta2", "hs", "hu"});
        for (int i = 0; i <= 280; ++i) {
            const double t2 = -12.0 + 0.05 * i;
            w.cell(t2).cell(separatrix_hs(t2)).cell(separatrix_hu(t2));
            w.end_row();
        }
    }
    {
        CsvWriter w(run.file("slow_manifold.csv"), {"theta", "eta", "last_term"});
        if (eps > 0.0) {
            const double top = 1.0 - default_kappa_factor * eps;
            for (int i = 0; i <= 200; ++i) {
                const double th = top * i / 200.0;
                const auto v = slow_manifold_eta(th, params, 3);
                w.cell(th).cell(v.eta).cell(v.last_term);
                w.end_row();
            }
        } else {
            // eps = 0: the slow manifold is the segment eta = 0 of the singular orbit.
            for (int i = 0; i <= 200; ++i) {
                w.cell(i / 200.0).cell(0.0).cell(0.0);
                w.end_row();
            }
        }
    }
    {
        CsvWriter w(run.file("vector_field.csv"), {"theta", "eta", "dtheta", "deta"});
        const double th_max = eps > 0.0 ? 1.0 + 10.0 * eps : 1.2;
        const double eta_max = std::abs(c) + 0.5;
        const int n = opts.grid;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double th = th_max * i / (n - 1), eta = eta_max * j / (n - 1);
                double a = std::numeric_limits<double>::quiet_NaN(), b = a;
                try {
                    const auto v = normalized_vector_field({th, eta}, params);
                    a = v[0];
                    b = v[1];
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::singular_limit)
                        throw;
                }
                w.cell(th).cell(eta).cell(a).cell(b);
                w.end_row();
            }
    }
    run.write_manifest();
    out << "portrait c = " << format_double(c) << ", eps = " << format_double(eps) << " written to " << common.out << '\n';
    return success;
}

int cmd_series(const Common& common, const SeriesOpts& opts, std::ostream& out)
{
    if (opts.K < 1 || opts.K > 8)
        throw UsageError("series: K must lie in [1, 8]");
    const double c = common.c ? parse_decimal(*common.c, "--c") : 2.0;
    if (!(c > 0.0))
        throw UsageError("series: c must be positive");
    const auto series = build_series(c, opts.K);

    Run run("series", common);
    const std::vector<double> eps_grid = common.eps.empty() ? std::vector<double>{0.01, 0.02, 0.05, 0.1} : eps_list(common);
    for (double e : eps_grid)
        if (!(e > 0.0))
            throw UsageError("series: eps values must be positive");
    fill_common(run, common, eps_grid);
    run.parameters["c"] = c;
    run.command_parameters["K"] = opts.K;

    {
        std::ofstream txt(run.file("series.txt"), std::ios::binary);
        for (int k = 1; k <= opts.K; ++k) {
            const auto line = series.format_term(k);
            out << line << '\n';
            txt << line << '\n';
        }
    }
    CsvWriter w(run.file("series.csv"), {"theta", "eps", "h", "last_term"});
    for (double e : eps_grid)
        for (int i = 0; i <= 20; ++i) {
            const double th = 0.05 * i;
            if (th > 1.0 - default_kappa_factor * e)
                break;
            const auto v = slow_manifold_eta(th, Params{c, e}, series);
            w.cell(th).cell(e).cell(v.eta).cell(v.last_term);
            w.end_row();
        }
    double worst = 0.0;
    for (int k = 1; k <= opts.K; ++k) worst = std::max(worst, recursion_residual(series, k));
    run.results["recursion_residual"] = worst;
    run.write_manifest();
    return success;
}

int cmd_pde(const Common& common, const PdeOpts& opts, std::ostream& out)
{
    const double eps = single_eps(common, 0.05);
    if (!(eps > 0.0))
        throw UsageError("pde: eps must be positive");
    if (eps < 0.02 && !common.force)
        throw UsageError("pde: eps < 0.02 needs --force (grid requirements grow like 1/eps)");
    PdeConfig cfg;
    cfg.N = static_cast<std::size_t>(std::max(opts.N, 0));
    cfg.L = parse_decimal(opts.L, "--L");
    cfg.T = parse_decimal(opts.T, "--T");
    cfg.x0 = parse_decimal(opts.x0, "--x0");
    if (opts.bc == "fixed")
        cfg.bc = BoundaryKind::fixed;
    else if (opts.bc == "zero_flux")
        cfg.bc = BoundaryKind::zero_flux;
    else
        throw UsageError("pde: --bc must be fixed or zero_flux");
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    Run run("pde", common);
    fill_common(run, common, json::array({eps}));
    run.command_parameters["N"] = opts.N;
    run.command_parameters["L"] = cfg.L;
    run.command_parameters["T"] = cfg.T;
    run.command_parameters["x0"] = cfg.x0;
    run.command_parameters["bc"] = opts.bc;
    run.command_parameters["snapshots"] = opts.snapshots;
    run.command_parameters["step"] = opts.step;
    if (opts.snapshots) {
        cfg.snapshot_dir = fs::path(common.out) / "snapshots";
        fs::create_directories(*cfg.snapshot_dir);
    }

    PdeResult res;
    double c = std::numeric_limits<double>::quiet_NaN(), cbar = c;
    if (opts.step) {
        // Exploratory: compactly varying data; the selected speed is measured, not asserted.
        res = pde_run(cfg, eps, step_initial_data(cfg.x0));
    } else {
        const ShootConfig scfg = shoot_config(common);
        const auto speed = choose_speed(common, eps, scfg);
        c = speed.c;
        cbar = speed.cbar;
        res = pde_run(cfg, eps, build_profile(c, eps, scfg));
    }
    {
        CsvWriter w(run.file("front_track.csv"), {"t", "position"});
        for (std::size_t i = 0; i < res.track.times.size(); ++i) {
            w.cell(res.track.times[i]).cell(res.track.positions[i]);
            w.end_row();
        }
    }
    for (const auto& p : res.snapshots) run.file((fs::path("snapshots") / p.filename()).string());
    run.results["c"] = number_or_null(c);
    run.results["cbar"] = number_or_null(cbar);
    run.results["speed_fit"] = number_or_null(res.track.speed_fit);
    run.results["fit_residual"] = number_or_null(res.track.fit_residual);
    run.results["relative_error"] = number_or_null(res.track.speed_fit / c - 1.0);
    run.results["clip_events"] = res.clip_events;
    run.results["truncated"] = res.truncated;
    run.results["final_time"] = res.final_time;
    run.write_manifest();
    out << "speed_fit " << format_double(res.track.speed_fit);
    if (std::isfinite(c))
        out << " (profile speed " << format_double(c) << ", relative error " << format_double(res.track.speed_fit / c - 1.0) << ")";
    out << (res.truncated ? ", truncated at the boundary" : "") << '\n';
    return success;
}

int cmd_verify(const Common& common, const VerifyOpts& opts, std::ostream& out)
{
    AcceptanceOptions acc;
    if (opts.inject == "hs-sign")
        acc.tail_integral = [] { return -hs_tail_integral(1e-12); };
    else if (opts.inject != "none")
        throw UsageError("verify: unknown fault '" + opts.inject + "'");
    acc.on_result = [&out](const CriterionResult& r) { out << format_result(r) << std::endl; };
    const auto results = run_acceptance(acc);

    Run run("verify", common);
    fill_common(run, common, json::array());
    run.command_parameters["inject_fault"] = opts.inject;
    json report = json::array();
    std::size_t failed = 0;
    for (const auto& r : results) {
        report.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"measured", r.measured}, {"seconds", r.seconds}});
        failed += r.pass ? 0 : 1;
    }
    {
        std::ofstream f(run.file("report.json"), std::ios::binary);
        f << report.dump(2) << '\n';
    }
    run.results["passed"] = results.size() - failed;
    run.results["failed"] = failed;
    run.write_manifest();
    out << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? success : computation_failure;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Minimal-speed travelling waves of the ZFK equation", "zfk"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<ManifestAwareConfig>());
    app.set_config("--config", "", "Read options from key = value lines or a manifest.json");

    Common common;
    app.add_option("--eps", common.eps, "eps value(s); comma-separated list for speed")->delimiter(',');
    app.add_option("--c", common.c, "Wave speed (default: minimal speed, or per command)");
    app.add_option("--out", common.out, "Output directory")->capture_default_str();
    app.add_option("--jobs", common.jobs, "Parallel rows / threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_flag("--force", common.force, "Skip the c >= cbar and eps >= 0.02 (pde) preconditions");
    app.add_option("--tol", common.tol, "Root tolerance in c")->capture_default_str();

    auto* speed = app.add_subcommand("speed", "Minimal speed cbar(eps) for each --eps value");

    ProfileOpts profile_opts;
    auto* profile = app.add_subcommand("profile", "Travelling-wave profile z,theta,eta,segment");
    profile->add_option("--zmin", profile_opts.zmin, "Lower end of the kept z window")->capture_default_str();
    profile->add_option("--zmax", profile_opts.zmax, "Upper end of the kept z window")->capture_default_str();

    PortraitOpts portrait_opts;
    auto* portrait = app.add_subcommand("portrait", "Invariant manifolds and a direction field");
    portrait->add_option("--grid", portrait_opts.grid, "Direction-field points per axis")->capture_default_str();

    SeriesOpts series_opts;
    auto* series = app.add_subcommand("series", "Slow-manifold series terms and values");
    series->add_option("--K", series_opts.K, "Truncation order (1..8)")->capture_default_str();

    PdeOpts pde_opts;
    auto* pde = app.add_subcommand("pde", "Evolve the PDE from a computed profile and fit the front speed");
    pde->add_option("--N", pde_opts.N, "Grid points")->capture_default_str();
    pde->add_option("--L", pde_opts.L, "Half-length of the domain")->capture_default_str();
    pde->add_option("--T", pde_opts.T, "Final time")->capture_default_str();
    pde->add_option("--x0", pde_opts.x0, "Initial front position")->capture_default_str();
    pde->add_option("--bc", pde_opts.bc, "fixed | zero_flux")->capture_default_str();
    pde->add_flag("--snapshots", pde_opts.snapshots, "Write snapshots/snapshot_NNNN.csv");
    pde->add_flag("--step", pde_opts.step, "Start from a step instead of a profile (exploratory)");

    VerifyOpts verify_opts;
    auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_option("--inject-fault", verify_opts.inject, "Mutation check: none | hs-sign")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return success;
    } catch (const CLI::CallForVersion&) {
        out << version << '\n';
        return success;
    } catch (const CLI::ParseError& e) {
        err << "zfk: " << e.what() << "\n(run zfk --help for usage)\n";
        return usage_error;
    }

    try {
        omp_set_num_threads(common.jobs);
        if (*speed)
            return cmd_speed(common, out);
        if (*profile)
            return cmd_profile(common, profile_opts, out);
        if (*portrait)
            return cmd_portrait(common, portrait_opts, out);
        if (*series)
            return cmd_series(common, series_opts, out);
        if (*pde)
            return cmd_pde(common, pde_opts, out);
        if (*verify)
            return cmd_verify(common, verify_opts, out);
    } catch (const UsageError& e) {
        err << "zfk: " << e.what() << '\n';
        return usage_error;
    } catch (const Error& e) {
        err << "zfk: " << e.what() << '\n';
        return computation_failure;
    } catch (const std::exception& e) {
        err << "zfk: " << e.what() << '\n';
        return computation_failure;
    }
    return usage_error;
}

} // namespace zfk::cli
