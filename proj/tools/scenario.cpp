#include "scenario.hpp"

#include "crs/errors.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace crs::cli {

namespace pt = boost::property_tree;

std::string_view to_string(SweepVariable v)
{
    switch (v) {
    case SweepVariable::rho_db: return "rho_db";
    case SweepVariable::omega_sr_rd: return "omega_sr_rd";
    case SweepVariable::a2: return "a2";
    }
    return "?";
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

std::vector<double> Sweep::values() const
{
    validate();
    std::vector<double> out;
    if (points == 1) return {start};
    for (int i = 0; i < points; ++i) {
        out.push_back(start + (stop - start) * i / (points - 1));
    }
    out.back() = stop;
    return out;
}

void Sweep::validate() const
{
    if (!std::isfinite(start) || !std::isfinite(stop)) {
        throw ConfigError("sweep bounds must be finite");
    }
    if (points < 1 || (points == 1 && start != stop)) {
        throw ConfigError(fmt::format(
            "sweep needs points >= 2 (or a single point with start == stop); got {}", points));
    }
}

std::vector<Family> Scenario::effective_families() const
{
    if (!families.empty()) return families;
    return {{links.sr.alpha, links.sr.mu}};
}

LinkTriple Scenario::links_for(const Family& f, double sweep_value) const
{
    LinkTriple l = links;
    if (!families.empty()) {
        for (LinkParams* p : {&l.sr, &l.sd, &l.rd}) {
            p->alpha = f.alpha;
            p->mu = f.mu;
        }
    }
    if (sweep.variable == SweepVariable::omega_sr_rd) {
        l.sr.omega = sweep_value;
        l.rd.omega = sweep_value;
    }
    return l;
}

double Scenario::rho_for(double sweep_value) const
{
    return db_to_linear(sweep.variable == SweepVariable::rho_db ? sweep_value : rho_db);
}

double Scenario::a2_for(double sweep_value) const
{
    return sweep.variable == SweepVariable::a2 ? sweep_value : a2;
}

void Scenario::validate() const
{
    links.validate();
    sweep.validate();
    mc.validate();
    for (const auto& f : families) {
        LinkParams{f.alpha, f.mu, 1.0}.validate();
    }
    if (!std::isfinite(rho_db)) throw ConfigError("rho_db must be finite");
    if (optimize_a2 && sweep.variable == SweepVariable::a2) {
        throw ConfigError("optimize_a2 cannot be combined with an a2 sweep");
    }
    if (grid_m < 1) throw ConfigError("optimize.m must be >= 1");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    for (double v : sweep.values()) {
        if (sweep.variable == SweepVariable::omega_sr_rd && !(v > 0.0)) {
            throw ConfigError("omega sweep values must be positive");
        }
        SystemConfig::make(rho_for(v), a2_for(v), r1, r2);
    }
}

std::vector<std::string> Scenario::provenance() const
{
    std::vector<std::string> out;
    const auto add = [&out](std::string_view key, const auto& value) {
        out.push_back(fmt::format("{} = {}", key, value));
    };
    add("scenario.name", name);
    for (const auto& [label, p] : {std::pair{"sr", links.sr}, {"sd", links.sd}, {"rd", links.rd}}) {
        add(fmt::format("links.{}_alpha", label), p.alpha);
        add(fmt::format("links.{}_mu", label), p.mu);
        add(fmt::format("links.{}_omega", label), p.omega);
    }
    std::vector<std::string> fams;
    for (const auto& f : families) fams.push_back(fmt::format("{}:{}", f.alpha, f.mu));
    add("links.families", boost::algorithm::join(fams, ", "));
    add("system.rho_db", rho_db);
    add("system.a2", a2);
    add("system.r1", r1);
    add("system.r2", r2);
    add("sweep.variable", to_string(sweep.variable));
    add("sweep.start", sweep.start);
    add("sweep.stop", sweep.stop);
    add("sweep.points", sweep.points);
    add("montecarlo.samples", mc.n);
    add("montecarlo.seed", mc.seed);
    add("rate.backend", to_string(backend));
    add("rate.optimize_a2", optimize_a2 ? "true" : "false");
    add("rate.tolerance", tolerance);
    add("optimize.m", grid_m);
    for (const auto& n : notes) add("note", n);
    return out;
}

namespace {

const std::map<std::string, std::set<std::string>>& schema()
{
    static const std::map<std::string, std::set<std::string>> s = {
        {"scenario", {"name"}},
        {"links",
         {"sr_alpha", "sr_mu", "sr_omega", "sd_alpha", "sd_mu", "sd_omega", "rd_alpha", "rd_mu",
          "rd_omega", "families"}},
        {"system", {"rho_db", "a2", "r1", "r2"}},
        {"sweep", {"variable", "start", "stop", "points"}},
        {"montecarlo", {"samples", "seed", "workers"}},
        {"rate", {"backend", "optimize_a2", "tolerance"}},
        {"optimize", {"m"}},
        {"output", {"path"}},
        {"validate", {"inject_alpha_perturbation"}},
    };
    return s;
}

template <typename T>
T get(const pt::ptree& tree, const std::string& path, T fallback)
{
    const auto node = tree.get_optional<std::string>(path);
    if (!node) return fallback;
    try {
        if constexpr (std::is_same_v<T, bool>) {
            const std::string v = boost::algorithm::to_lower_copy(*node);
            if (v == "true" || v == "1" || v == "yes") return true;
            if (v == "false" || v == "0" || v == "no") return false;
            throw std::invalid_argument(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
            return *node;
        } else {
            std::istringstream in(*node);
            T value{};
            in >> value;
            if (!in || !(in >> std::ws).eof()) throw std::invalid_argument(*node);
            return value;
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError(fmt::format("invalid value '{}' for {}", *node, path));
    }
}

std::vector<Family> parse_families(const std::string& text)
{
    std::vector<Family> out;
    std::vector<std::string> items;
    boost::algorithm::split(items, text, boost::is_any_of(","));
    for (auto item : items) {
        boost::algorithm::trim(item);
        if (item.empty()) continue;
        std::vector<std::string> parts;
        boost::algorithm::split(parts, item, boost::is_any_of(":"));
        if (parts.size() != 2) {
            throw ConfigError(fmt::format("family '{}' must read alpha:mu", item));
        }
        try {
            out.push_back({std::stod(parts[0]), std::stod(parts[1])});
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("family '{}' must read alpha:mu", item));
        }
    }
    return out;
}

SweepVariable parse_variable(const std::string& v)
{
    if (v == "rho_db") return SweepVariable::rho_db;
    if (v == "omega_sr_rd") return SweepVariable::omega_sr_rd;
    if (v == "a2") return SweepVariable::a2;
    throw ConfigError(fmt::format("unknown sweep variable '{}' (rho_db, omega_sr_rd, a2)", v));
}

void read_link(const pt::ptree& t, const std::string& label, LinkParams& p)
{
    p.alpha = get(t, "links." + label + "_alpha", p.alpha);
    p.mu = get(t, "links." + label + "_mu", p.mu);
    p.omega = get(t, "links." + label + "_omega", p.omega);
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& name)
{
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("{}: {}", name, e.message()));
    }
    for (const auto& [section, body] : tree) {
        const auto it = schema().find(section);
        if (it == schema().end() || body.empty()) {
            throw ConfigError(fmt::format("{}: unknown section or top-level key '{}'", name, section));
        }
        for (const auto& [key, value] : body) {
            const bool note = section == "output" && key.rfind("note", 0) == 0;
            if (!note && !it->second.contains(key)) {
                throw ConfigError(fmt::format("{}: unknown key '{}.{}'", name, section, key));
            }
        }
    }

    Scenario s;
    s.name = get<std::string>(tree, "scenario.name", name);
    read_link(tree, "sr", s.links.sr);
    read_link(tree, "sd", s.links.sd);
    read_link(tree, "rd", s.links.rd);
    s.families = parse_families(get<std::string>(tree, "links.families", ""));

    s.rho_db = get(tree, "system.rho_db", s.rho_db);
    s.a2 = get(tree, "system.a2", s.a2);
    s.r1 = get(tree, "system.r1", s.r1);
    s.r2 = get(tree, "system.r2", s.r2);

    s.sweep.variable = parse_variable(get<std::string>(tree, "sweep.variable", "rho_db"));
    const double fixed = s.sweep.variable == SweepVariable::rho_db ? s.rho_db
                         : s.sweep.variable == SweepVariable::a2  ? s.a2
                                                                  : s.links.sr.omega;
    s.sweep.start = get(tree, "sweep.start", fixed);
    s.sweep.stop = get(tree, "sweep.stop", s.sweep.start);
    s.sweep.points = get(tree, "sweep.points", s.sweep.start == s.sweep.stop ? 1 : 2);

    s.mc.n = get<std::uint64_t>(tree, "montecarlo.samples", s.mc.n);
    s.mc.seed = get<std::uint64_t>(tree, "montecarlo.seed", s.mc.seed);
    s.mc.workers = get<unsigned>(tree, "montecarlo.workers", s.mc.workers);

    s.backend = parse_backend(get<std::string>(tree, "rate.backend", "quadrature"));
    s.optimize_a2 = get(tree, "rate.optimize_a2", s.optimize_a2);
    s.tolerance = get(tree, "rate.tolerance", s.tolerance);
    s.grid_m = get(tree, "optimize.m", s.grid_m);
    s.out = get<std::string>(tree, "output.path", "");
    if (const auto out = tree.get_child_optional("output")) {
        for (const auto& [key, value] : *out) {
            if (key.rfind("note", 0) == 0) s.notes.push_back(value.data());
        }
    }
    s.inject_alpha_perturbation =
        get(tree, "validate.inject_alpha_perturbation", s.inject_alpha_perturbation);
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open scenario file '{}'", path));
    return parse_scenario(in, path);
}

}  // namespace crs::cli
