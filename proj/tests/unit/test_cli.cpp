#include <doctest.h>

#include "commands.hpp"
#include "scenario.hpp"

#include "crs/errors.hpp"

#include <sstream>
#include <string>
#include <vector>

#include <boost/algorithm/string.hpp>
#include <json.hpp>

using namespace crs;
using namespace crs::cli;

namespace {

Scenario parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_scenario(in, "test");
}

// Data rows of a CSV as split fields, header first.
std::vector<std::vector<std::string>> table(const std::string& csv)
{
    std::vector<std::vector<std::string>> out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        boost::algorithm::split(fields, line, boost::is_any_of(","));
        out.push_back(fields);
    }
    return out;
}

std::size_t column(const std::vector<std::vector<std::string>>& t, const std::string& name)
{
    for (std::size_t i = 0; i < t.front().size(); ++i) {
        if (t.front()[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
}

Scenario shipped(const std::string& file)
{
    return load_scenario(std::string(CRS_SCENARIO_DIR) + "/" + file);
}

}  // namespace

TEST_CASE("scenario parsing")
{
    const Scenario s = parse(R"(
[scenario]
name = demo
[links]
sr_alpha = 3
sd_omega = 2
families = 2:1, 4:0.5
[system]
rho_db = 15
a2 = 0.2
[sweep]
variable = omega_sr_rd
start = 1
stop = 5
points = 5
[montecarlo]
samples = 20000
seed = 42
[rate]
backend = closed-form
optimize_a2 = yes
[output]
note1 = first
note2 = second
)");
    CHECK(s.name == "demo");
    CHECK(s.links.sr.alpha == 3.0);
    CHECK(s.links.sd.omega == 2.0);
    REQUIRE(s.families.size() == 2);
    CHECK(s.families[1].mu == 0.5);
    CHECK(s.rho_for(3.0) == doctest::Approx(std::pow(10.0, 1.5)));
    CHECK(s.sweep.values() == std::vector<double>{1, 2, 3, 4, 5});
    CHECK(s.links_for(s.families[1], 3.0).rd.omega == 3.0);
    CHECK(s.links_for(s.families[1], 3.0).sd.alpha == 4.0);
    CHECK(s.mc.n == 20000);
    CHECK(s.mc.seed == 42);
    CHECK(s.backend == Backend::closed_form);
    CHECK(s.optimize_a2);
    CHECK(s.notes == std::vector<std::string>{"first", "second"});
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("scenario rejects unknown or malformed input")
{
    CHECK_THROWS_AS(parse("[links]\nsr_gamma = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[physics]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("stray = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[system]\nrho_db = loud\n"), ConfigError);
    CHECK_THROWS_AS(parse("[links]\nfamilies = 2-1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[sweep]\nvariable = mu\n"), ConfigError);
    CHECK_THROWS_AS(parse("[rate]\nbackend = exact\n"), ConfigError);
    CHECK_THROWS_AS(parse("[system]\na2 = 0.6\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse("[sweep]\nstart = 0\nstop = 10\npoints = 1\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse("[sweep]\nstart = 0\nstop = inf\npoints = 3\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse("[montecarlo]\nsamples = 10\n").validate(), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.ini"), ConfigError);
}

TEST_CASE("dB conversion")
{
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(20.0) == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(db_to_linear(-10.0) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("single-point rate run")
{
    const Scenario s = parse("[system]\nrho_db = 0\n[montecarlo]\nsamples = 10000\n");
    const auto t = table(cmd_rate(s));
    REQUIRE(t.size() == 2);
    for (const char* name : {"c_s1", "c_s2", "c_noma_total", "c_oma"}) {
        const double v = std::stod(t[1][column(t, name)]);
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
    }
    CHECK(t[1][column(t, "backend")] == "quadrature");
}

TEST_CASE("CSV output is deterministic")
{
    const Scenario s = parse(R"(
[links]
families = 2:1, 3:1
[sweep]
start = 0
stop = 20
points = 3
[montecarlo]
samples = 20000
seed = 9
)");
    const std::string a = cmd_rate(s);
    CHECK(a == cmd_rate(s));
    CHECK(a.find('\r') == std::string::npos);
    CHECK(a.back() == '\n');
    CHECK(a.rfind("# command = rate\n", 0) == 0);
    CHECK(a.find("# montecarlo.seed = 9\n") != std::string::npos);
    const std::string o = cmd_outage(s);
    CHECK(o == cmd_outage(s));

    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(30.0) == "30");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("infeasible allocation gives certain s1 outage")
{
    const Scenario s = parse(R"(
[system]
a2 = 0.3
[sweep]
start = 0
stop = 50
points = 6
[montecarlo]
samples = 10000
)");
    const auto t = table(cmd_outage(s));
    REQUIRE(t.size() == 7);
    for (std::size_t i = 1; i < t.size(); ++i) {
        CHECK(t[i][column(t, "p_out1_closed")] == "1");
        CHECK(t[i][column(t, "p_out1_mc")] == "1");
    }
}

TEST_CASE("shipped rate-vs-SNR scenario: NOMA beats OMA at high SNR")
{
    Scenario s = shipped("rate_vs_snr.ini");
    s.mc.n = 100'000;
    const auto t = table(cmd_rate(s));
    const auto c_alpha = column(t, "alpha"), c_mu = column(t, "mu"), c_rho = column(t, "rho_db");
    int seen = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double rho = std::stod(t[i][c_rho]);
        if (t[i][c_alpha] != "2" || t[i][c_mu] != "1" || rho < 30.0) continue;
        ++seen;
        CHECK(std::stod(t[i][column(t, "c_noma_total")]) > std::stod(t[i][column(t, "c_oma")]));
    }
    CHECK(seen == 2);
}

TEST_CASE("shipped Omega scenario is monotone in Omega")
{
    Scenario s = shipped("rate_vs_omega.ini");
    s.mc.n = 10'000;
    const auto t = table(cmd_rate(s));
    const auto c_alpha = column(t, "alpha"), c_mu = column(t, "mu");
    const auto c_total = column(t, "c_noma_total");
    for (std::size_t i = 2; i < t.size(); ++i) {
        if (t[i][c_alpha] != t[i - 1][c_alpha] || t[i][c_mu] != t[i - 1][c_mu]) continue;
        CHECK(std::stod(t[i][c_total]) >= std::stod(t[i - 1][c_total]));
    }
}

TEST_CASE("shipped scenarios all validate")
{
    for (const char* f : {"rate_vs_snr.ini", "rate_vs_omega.ini", "rate_vs_snr_alpha.ini",
                          "rate_vs_snr_mu.ini", "outage_vs_snr.ini", "optimal_a2.ini"}) {
        CAPTURE(f);
        CHECK_NOTHROW(shipped(f).validate());
    }
    const std::string o = cmd_outage([] {
        Scenario s = shipped("outage_vs_snr.ini");
        s.mc.n = 10'000;
        return s;
    }());
    CHECK(o.find("# note = ") != std::string::npos);
    CHECK(o.find("# slope alpha=2 mu=1") != std::string::npos);
}

TEST_CASE("optimize command")
{
    Scenario s = parse(R"(
[links]
families = 2:1
[sweep]
start = 0
stop = 35
points = 8
)");
    const auto t = table(cmd_optimize(s));
    REQUIRE(t.size() == 9);
    const std::vector<std::string> expected = {"0.23999999999999999", "0.23999999999999999",
                                               "0.23999999999999999", "0.23999999999999999",
                                               "0.17000000000000001", "0.10000000000000001",
                                               "0.059999999999999998", "0.040000000000000001"};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(t[i + 1][column(t, "a2_opt")] == expected[i]);
    }

    s.grid_m = 1;
    const auto one = table(cmd_optimize(s));
    for (std::size_t i = 1; i < one.size(); ++i) {
        CHECK(std::stod(one[i][column(one, "a2_opt")]) == doctest::Approx(0.125));
    }
}

TEST_CASE("validate command")
{
    Scenario s;
    const ValidateReport ok = cmd_validate(s);
    const auto report = nlohmann::json::parse(ok.json);
    CHECK(ok.passed);
    CHECK(report["status"] == "pass");
    CHECK(report["groups"].size() == 8);
    for (const auto& g : report["groups"]) {
        CAPTURE(g["name"].get<std::string>());
        CHECK(g["status"] == "pass");
        CHECK(g["checks"].get<int>() > 0);
    }

    Scenario bad;
    bad.inject_alpha_perturbation = 0.05;
    const ValidateReport failed = cmd_validate(bad);
    const auto broken = nlohmann::json::parse(failed.json);
    CHECK_FALSE(failed.passed);
    for (const auto& g : broken["groups"]) {
        const std::string name = g["name"];
        const bool mc = name == "mc_rates" || name == "mc_outage";
        CAPTURE(name);
        CHECK(g["status"] == (mc ? "fail" : "pass"));
    }
}

TEST_CASE("tightened tolerance downgrades convergence failures to warnings")
{
    // 100x tighter still converges; 1e-15 sits below the contour noise floor.
    for (const auto& [tol, min_warnings] : {std::pair{1e-10, 0}, {1e-15, 1}}) {
        Scenario s;
        s.tolerance = tol;
        const ValidateReport r = cmd_validate(s);
        const auto report = nlohmann::json::parse(r.json);
        int warnings = 0;
        for (const auto& g : report["groups"]) {
            CHECK(g["status"] != "fail");
            warnings += g["status"] == "warning";
        }
        CHECK(warnings >= min_warnings);
        CHECK(r.passed);
    }
}
