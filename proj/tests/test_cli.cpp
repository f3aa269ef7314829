#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "zfk/charts.hpp"
#include "zfk/commands.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome zfk_run(std::vector<std::string> args)
{
    args.insert(args.begin(), "zfk");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = zfk::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / "zfk_cli_tests" / name;
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const
    {
        const auto it = std::find(header.begin(), header.end(), name);
        REQUIRE(it != header.end());
        return static_cast<std::size_t>(it - header.begin());
    }
    double num(std::size_t r, const std::string& name) const { return std::stod(rows.at(r).at(col(name))); }
};

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

Table read_csv(const fs::path& p)
{
    const std::string text = slurp(p);
    REQUIRE(text.find('\r') == std::string::npos);
    Table t;
    std::istringstream in(text);
    std::string line;
    REQUIRE(std::getline(in, line));
    t.header = split(line);
    while (std::getline(in, line)) t.rows.push_back(split(line));
    return t;
}

json manifest(const fs::path& dir) { return json::parse(slurp(dir / "manifest.json")); }

/// Linear interpolation of eta(theta) on a polyline (theta need not be sorted).
std::map<double, double> as_map(const Table& t)
{
    std::map<double, double> m;
    for (std::size_t r = 0; r < t.rows.size(); ++r) m[t.num(r, "theta")] = t.num(r, "eta");
    return m;
}

double interp(const std::map<double, double>& m, double x)
{
    auto hi = m.lower_bound(x);
    if (hi == m.end() || hi == m.begin())
        return std::nan("");
    auto lo = std::prev(hi);
    const double w = (x - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

} // namespace

TEST_CASE("speed: empty list gives a header-only table")
{
    const auto dir = scratch("speed_empty");
    const auto r = zfk_run({"speed", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(slurp(dir / "speed.csv") == "eps,cbar,cbar_linear,gap_residual,iterations,slope,theta_shift,error\n");
    const auto m = manifest(dir);
    CHECK(m["command"] == "speed");
    CHECK(m["parameters"]["eps"].empty());
    CHECK(m["outputs"] == json::array({"speed.csv"}));
}

TEST_CASE("speed: single row and slope column")
{
    const auto dir = scratch("speed_rows");
    const auto r = zfk_run({"speed", "--eps", "0.02,0.01,0.005", "--out", dir.string(), "--jobs", "2"});
    REQUIRE(r.code == 0);
    const auto t = read_csv(dir / "speed.csv");
    REQUIRE(t.rows.size() == 3);
    CHECK(t.num(1, "eps") == 0.01);
    CHECK(std::abs(t.num(1, "cbar") - 1.00344) <= 5e-4);
    CHECK(std::abs(t.num(1, "cbar_linear") - 1.0034405) <= 1e-7);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(t.num(i, "slope") - 0.34405) <= 0.02);
        CHECK(t.rows[i][t.col("error")].empty());
        CHECK(t.num(i, "iterations") >= 1);
    }
}

TEST_CASE("speed: failing rows are recorded and the run continues")
{
    const auto dir = scratch("speed_fail");
    const auto r = zfk_run({"speed", "--eps", "0.05,0.01", "--tol", "1e-300", "--out", dir.string()});
    CHECK(r.code == 1);
    const auto t = read_csv(dir / "speed.csv");
    REQUIRE(t.rows.size() == 2);
    for (const auto& row : t.rows) CHECK(row.back() == "root_stagnation");
    CHECK(manifest(dir)["results"]["failed_rows"] == 2);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(zfk_run({}).code == 2);
    CHECK(zfk_run({"nonsense"}).code == 2);
    CHECK(zfk_run({"speed", "--eps", "0.2", "--out", scratch("u1").string()}).code == 2);
    CHECK(zfk_run({"speed", "--eps", "1/100"}).code == 2);
    CHECK(zfk_run({"profile", "--eps", "0.01,0.02"}).code == 2);
    CHECK(zfk_run({"series", "--K", "9"}).code == 2);
    CHECK(zfk_run({"series", "--K", "0"}).code == 2);
    CHECK(zfk_run({"pde", "--eps", "0.01"}).code == 2);
    CHECK(zfk_run({"pde", "--N", "100"}).code == 2);
    CHECK(zfk_run({"speed", "--jobs", "0"}).code == 2);
    CHECK(zfk_run({"--help"}).code == 0);
    CHECK(zfk_run({"--version"}).out == std::string(zfk::cli::version) + "\n");
}

TEST_CASE("profile: weak, strong and forbidden speeds")
{
    SUBCASE("c = 1.5 has all three segments")
    {
        const auto dir = scratch("profile_weak");
        REQUIRE(zfk_run({"profile", "--eps", "0.01", "--c", "1.5", "--out", dir.string()}).code == 0);
        const auto t = read_csv(dir / "profile.csv");
        CHECK(t.header == std::vector<std::string>{"z", "theta", "eta", "segment"});
        std::set<int> seg;
        for (std::size_t i = 0; i < t.rows.size(); ++i) seg.insert(static_cast<int>(t.num(i, "segment")));
        CHECK(seg == std::set<int>{0, 1, 2});
    }
    SUBCASE("the minimal speed gives fast and inner segments only")
    {
        const auto dir = scratch("profile_strong");
        REQUIRE(zfk_run({"profile", "--eps", "0.01", "--out", dir.string()}).code == 0);
        const auto t = read_csv(dir / "profile.csv");
        std::set<int> seg;
        for (std::size_t i = 0; i < t.rows.size(); ++i) seg.insert(static_cast<int>(t.num(i, "segment")));
        CHECK(seg == std::set<int>{1, 2});
        const auto m = manifest(dir);
        CHECK(m["results"]["c"] == m["results"]["cbar"]);
        CHECK(m["parameters"]["c"].is_null());
    }
    SUBCASE("c below the minimal speed is refused")
    {
        const auto r = zfk_run({"profile", "--eps", "0.01", "--c", "0.9", "--out", scratch("p09").string()});
        CHECK(r.code == 1);
        CHECK(r.err.find("no_connection") != std::string::npos);
        const auto forced = zfk_run({"profile", "--eps", "0.01", "--c", "0.9", "--force", "--out", scratch("p09f").string()});
        CHECK(forced.code == 1);
    }
}

TEST_CASE("portrait: manifold files")
{
    SUBCASE("c = 1.5: W^s lies below the strong unstable manifold")
    {
        const auto dir = scratch("portrait_weak");
        REQUIRE(zfk_run({"portrait", "--eps", "0.01", "--c", "1.5", "--out", dir.string()}).code == 0);
        for (const char* f : {"stable_manifold.csv", "unstable_manifold.csv", "separatrix.csv", "slow_manifold.csv", "vector_field.csv"})
            CHECK(fs::exists(dir / f));
        const auto ws = as_map(read_csv(dir / "stable_manifold.csv"));
        const auto wu = as_map(read_csv(dir / "unstable_manifold.csv"));
        int compared = 0;
        for (double th = 0.35; th <= 0.97; th += 0.01) {
            const double a = interp(ws, th), b = interp(wu, th);
            if (std::isnan(a) || std::isnan(b))
                continue;
            ++compared;
            CHECK(a < b);
        }
        CHECK(compared > 50);
        const auto vf = read_csv(dir / "vector_field.csv");
        CHECK(vf.rows.size() == 25u * 25u);
    }
    SUBCASE("minimal speed: the two manifolds are inseparable")
    {
        const auto sdir = scratch("portrait_speed");
        REQUIRE(zfk_run({"speed", "--eps", "0.01", "--out", sdir.string()}).code == 0);
        const std::string cbar = read_csv(sdir / "speed.csv").rows[0][1];
        const auto dir = scratch("portrait_strong");
        REQUIRE(zfk_run({"portrait", "--eps", "0.01", "--c", cbar, "--out", dir.string()}).code == 0);
        const auto ws = as_map(read_csv(dir / "stable_manifold.csv"));
        const auto wu = as_map(read_csv(dir / "unstable_manifold.csv"));
        double gap = 0.0;
        for (double th = 0.5; th <= 0.9; th += 0.005) gap = std::max(gap, std::abs(interp(ws, th) - interp(wu, th)));
        CHECK(gap <= 1e-3);
    }
    SUBCASE("eps = 0: W^s is the separatrix on theta = 1")
    {
        const auto dir = scratch("portrait_zero");
        REQUIRE(zfk_run({"portrait", "--eps", "0", "--c", "1.5", "--out", dir.string()}).code == 0);
        const auto t = read_csv(dir / "stable_manifold.csv");
        REQUIRE(t.rows.size() > 10);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            CHECK(t.num(i, "theta") == 1.0);
            const double t2 = t.num(i, "theta2");
            if (t2 <= -1e-3)
                CHECK(std::abs(t.num(i, "eta") - zfk::separatrix_hs(t2)) <= 1e-6);
        }
    }
}

TEST_CASE("series: printed terms and table")
{
    const auto dir = scratch("series");
    const auto r = zfk_run({"series", "--c", "2", "--K", "4", "--out", dir.string()});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::vector<std::string> terms;
    for (std::string l; std::getline(lines, l);) terms.push_back(l);
    REQUIRE(terms.size() == 4);
    CHECK(terms[0] == "F_1 = theta*(1-theta)/2");
    CHECK(terms[1] == "F_2 = theta*(1-theta)*(theta - theta^2 + eps - 2*theta*eps)/8");
    // Every term carries the factor theta, so all vanish at theta = 0.
    for (std::size_t k = 0; k < terms.size(); ++k)
        CHECK(terms[k].rfind("F_" + std::to_string(k + 1) + " = theta*(1-theta)", 0) == 0);
    CHECK(slurp(dir / "series.txt") == r.out);
    const auto t = read_csv(dir / "series.csv");
    CHECK(t.header == std::vector<std::string>{"theta", "eps", "h", "last_term"});
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (t.num(i, "theta") == 0.0)
            CHECK(t.num(i, "h") == 0.0);
    CHECK(manifest(dir)["results"]["recursion_residual"].get<double>() <= 1e-12);
}

TEST_CASE("pde: front speed from the minimal-speed profile")
{
    const auto dir = scratch("pde");
    const auto r = zfk_run({"pde", "--eps", "0.05", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto m = manifest(dir);
    const double fit = m["results"]["speed_fit"], cbar = m["results"]["cbar"];
    CHECK(std::abs(fit / cbar - 1.0) <= 0.02);
    CHECK(m["results"]["truncated"] == false);
    const auto t = read_csv(dir / "front_track.csv");
    CHECK(t.header == std::vector<std::string>{"t", "position"});
    CHECK(t.rows.size() == 81);
}

TEST_CASE("determinism, manifests and configuration precedence")
{
    const auto a = scratch("det_a"), b = scratch("det_b"), replay = scratch("det_replay");
    REQUIRE(zfk_run({"profile", "--eps", "0.02", "--c", "1.5", "--out", a.string()}).code == 0);
    REQUIRE(zfk_run({"profile", "--eps", "0.02", "--c", "1.5", "--out", b.string()}).code == 0);
    CHECK(slurp(a / "profile.csv") == slurp(b / "profile.csv"));

    // The manifest carries every default and reproduces the output bit for bit.
    const auto m = manifest(a);
    for (const char* key : {"eps", "c", "out", "jobs", "force", "tol"}) CHECK(m["parameters"].contains(key));
    CHECK(m["command_parameters"].contains("zmin"));
    CHECK(m["version"] == std::string(zfk::cli::version));
    REQUIRE(zfk_run({"profile", "--config", (a / "manifest.json").string(), "--out", replay.string()}).code == 0);
    CHECK(slurp(a / "profile.csv") == slurp(replay / "profile.csv"));

    // key = value file; the command line wins over the file.
    const auto cfg_dir = scratch("det_cfg");
    fs::create_directories(cfg_dir);
    {
        std::ofstream f(cfg_dir / "run.ini");
        f << "eps = 0.02\nc = 1.5\n[profile]\nzmin = -40\n";
    }
    const auto from_file = scratch("det_file"), overridden = scratch("det_override");
    REQUIRE(zfk_run({"profile", "--config", (cfg_dir / "run.ini").string(), "--out", from_file.string()}).code == 0);
    const auto mf = manifest(from_file);
    CHECK(mf["parameters"]["c"] == 1.5);
    CHECK(mf["command_parameters"]["zmin"] == -40.0);
    REQUIRE(zfk_run({"profile", "--config", (cfg_dir / "run.ini").string(), "--c", "2", "--out", overridden.string()}).code == 0);
    CHECK(manifest(overridden)["parameters"]["c"] == 2.0);
    CHECK(manifest(overridden)["parameters"]["eps"] == json::array({0.02}));
}

TEST_CASE("verify: a sign flip in the tail integral fails exactly the slope criteria")
{
    const auto clean = zfk_run({"verify", "--out", scratch("verify").string()});
    const auto mutated = zfk_run({"verify", "--inject-fault", "hs-sign", "--out", scratch("verify_mut").string()});
    auto failures = [](const std::string& text) {
        std::set<int> ids;
        std::istringstream in(text);
        for (std::string l; std::getline(in, l);)
            if (l.rfind("FAIL", 0) == 0)
                ids.insert(std::stoi(l.substr(4, 3)));
        return ids;
    };
    const auto base = failures(clean.out), mut = failures(mutated.out);
    std::set<int> added;
    std::set_difference(mut.begin(), mut.end(), base.begin(), base.end(), std::inserter(added, added.end()));
    CHECK(added == std::set<int>{1, 2, 3, 5});
    CHECK(std::includes(mut.begin(), mut.end(), base.begin(), base.end()));
    CHECK(mutated.code == 1);
    CHECK(clean.code == (base.empty() ? 0 : 1));
    CHECK(zfk_run({"verify", "--inject-fault", "bogus"}).code == 2);
}

TEST_CASE("the installed binary reports exit codes")
{
    const char* exe = std::getenv("ZFK_CLI");
    if (exe == nullptr) {
        MESSAGE("ZFK_CLI not set; skipping binary checks");
        return;
    }
    auto status = [](const std::string& cmd) {
        const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(s);
    };
    const std::string e = exe;
    const auto dir = scratch("binary");
    CHECK(status(e + " --help") == 0);
    CHECK(status(e + " speed --eps 0.5") == 2);
    CHECK(status(e + " profile --eps 0.01 --c 0.9 --out " + dir.string()) == 1);
    CHECK(status(e + " speed --eps 0.05 --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "manifest.json"));
}
