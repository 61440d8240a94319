#include "akbeam/config.hpp"

#include <nlohmann/json.hpp>

#include "akbeam/csv.hpp"
#include "akbeam/errors.hpp"

namespace akbeam {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& section,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw ConfigError(section + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError("unknown field " + section + "." + key);
    }
}

template <typename T>
void read_field(const json& j, const std::string& section, const char* key,
                T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("field " + section + "." + key +
                          " has the wrong type");
    }
}

void parse_beam(const json& j, BeamConfig& beam) {
    check_keys(j, "beam",
               {"total_length", "fixed_supports", "movable_support_count",
                "loads", "elastic_modulus", "shear_modulus", "area", "inertia",
                "shear_correction", "elements_per_span_min", "beam_theory"});
    read_field(j, "beam", "total_length", beam.total_length);
    read_field(j, "beam", "fixed_supports", beam.fixed_supports);
    read_field(j, "beam", "movable_support_count", beam.movable_support_count);
    if (j.contains("loads")) {
        beam.loads.clear();
        for (const auto& jl : j.at("loads")) {
            check_keys(jl, "beam.loads[]", {"position", "magnitude"});
            PointLoad load;
            read_field(jl, "beam.loads[]", "position", load.position);
            read_field(jl, "beam.loads[]", "magnitude", load.magnitude);
            beam.loads.push_back(load);
        }
    }
    read_field(j, "beam", "elastic_modulus", beam.elastic_modulus);
    read_field(j, "beam", "shear_modulus", beam.shear_modulus);
    read_field(j, "beam", "area", beam.area);
    read_field(j, "beam", "inertia", beam.inertia);
    read_field(j, "beam", "shear_correction", beam.shear_correction);
    read_field(j, "beam", "elements_per_span_min", beam.elements_per_span_min);
    if (j.contains("beam_theory")) {
        const std::string theory = j.at("beam_theory");
        if (theory == "timoshenko")
            beam.theory = BeamTheory::timoshenko;
        else if (theory == "euler_bernoulli")
            beam.theory = BeamTheory::euler_bernoulli;
        else
            throw ConfigError("beam.beam_theory must be timoshenko or "
                              "euler_bernoulli");
    }
}

void parse_space(const json& j, DesignSpace& space) {
    check_keys(j, "space", {"variables"});
    if (!j.contains("variables")) return;
    space.variables.clear();
    for (const auto& jv : j.at("variables")) {
        check_keys(jv, "space.variables[]", {"name", "lower", "upper"});
        DesignVariable v;
        read_field(jv, "space.variables[]", "name", v.name);
        read_field(jv, "space.variables[]", "lower", v.lower);
        read_field(jv, "space.variables[]", "upper", v.upper);
        space.variables.push_back(std::move(v));
    }
}

void parse_limit_state(const json& j, LimitStateConfig& lsc) {
    check_keys(j, "limit_state", {"rule", "fixed_value"});
    if (j.contains("rule")) {
        const std::string rule = j.at("rule");
        if (rule == "first_span_over_400")
            lsc.rule = LimitRule::first_span_over_400;
        else if (rule == "fixed_value")
            lsc.rule = LimitRule::fixed_value;
        else if (rule == "span_max_over_400")
            lsc.rule = LimitRule::span_max_over_400;
        else
            throw ConfigError("limit_state.rule must be first_span_over_400, "
                              "fixed_value or span_max_over_400");
    }
    read_field(j, "limit_state", "fixed_value", lsc.fixed_value);
}

void parse_trend(const json& j, TrendSpec& trend) {
    check_keys(j, "surrogate.trend", {"kind", "degree"});
    if (j.contains("kind")) {
        const std::string kind = j.at("kind");
        if (kind == "polynomial_additive")
            trend.kind = TrendKind::polynomial_additive;
        else if (kind == "polynomial_total_degree")
            trend.kind = TrendKind::polynomial_total_degree;
        else
            throw ConfigError("surrogate.trend.kind must be "
                              "polynomial_additive or polynomial_total_degree");
    }
    read_field(j, "surrogate.trend", "degree", trend.degree);
    if (trend.degree < 0)
        throw ConfigError("surrogate.trend.degree must be >= 0");
}

void parse_correlation(const json& j, CorrelationSpec& corr) {
    check_keys(j, "surrogate.correlation",
               {"nu", "theta_bounds", "nugget"});
    if (j.contains("nu")) corr.nu = matern_nu_from_string(j.at("nu"));
    if (j.contains("theta_bounds")) {
        const auto bounds = j.at("theta_bounds").get<std::vector<double>>();
        if (bounds.size() != 2 || !(bounds[0] > 0.0) ||
            !(bounds[0] < bounds[1]))
            throw ConfigError("surrogate.correlation.theta_bounds must be "
                              "[lower, upper] with 0 < lower < upper");
        corr.theta_lower = bounds[0];
        corr.theta_upper = bounds[1];
    }
    read_field(j, "surrogate.correlation", "nugget", corr.nugget);
    if (corr.nugget < 0.0 || corr.nugget > 1e-4)
        throw ConfigError("surrogate.correlation.nugget must be in [0, 1e-4]");
}

void parse_surrogate(const json& j, SurrogateConfig& surrogate) {
    check_keys(j, "surrogate", {"type", "trend", "pck_degree", "correlation"});
    if (j.contains("type")) {
        const std::string type = j.at("type");
        if (type == "kriging")
            surrogate.kind = SurrogateKind::kriging;
        else if (type == "pck")
            surrogate.kind = SurrogateKind::pck;
        else
            throw ConfigError("surrogate.type must be kriging or pck");
    }
    if (j.contains("trend")) parse_trend(j.at("trend"), surrogate.trend);
    read_field(j, "surrogate", "pck_degree", surrogate.pck_degree);
    if (surrogate.pck_degree < 0)
        throw ConfigError("surrogate.pck_degree must be >= 0");
    if (j.contains("correlation"))
        parse_correlation(j.at("correlation"), surrogate.correlation);
}

void parse_subset(const json& j, SubsetConfig& subset) {
    check_keys(j, "reliability.subset",
               {"p0", "n_per_level", "max_levels", "proposal_std"});
    read_field(j, "reliability.subset", "p0", subset.p0);
    read_field(j, "reliability.subset", "n_per_level", subset.n_per_level);
    read_field(j, "reliability.subset", "max_levels", subset.max_levels);
    read_field(j, "reliability.subset", "proposal_std", subset.proposal_std);
}

void parse_al(const json& j, ALConfig& al) {
    check_keys(j, "al", {"eps_pf", "consecutive_required", "max_calls",
                         "pool_size", "batch"});
    read_field(j, "al", "eps_pf", al.eps_pf);
    read_field(j, "al", "consecutive_required", al.consecutive_required);
    read_field(j, "al", "max_calls", al.max_calls);
    read_field(j, "al", "pool_size", al.pool_size);
    read_field(j, "al", "batch", al.batch);
}

}  // namespace

AppConfig AppConfig::defaults() {
    AppConfig cfg;
    cfg.space.variables = {{"x1", 3.0, 18.0}, {"x2", 23.0, 38.0}};
    return cfg;
}

void AppConfig::validate() const {
    beam.validate();
    space.validate();
    if (space.dimension() != beam.movable_support_count)
        throw ConfigError("space.variables count must equal "
                          "beam.movable_support_count");
    if (n_reference < 1)
        throw ConfigError("reliability.n_reference must be >= 1");
    if (grid_resolution < 2)
        throw ConfigError("grid_resolution must be >= 2");
    subset.validate();
    ALConfig al_check = al;
    al_check.subset = subset;
    al_check.validate();
}

AppConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, "config", {"beam", "space", "limit_state", "surrogate",
                             "reliability", "al", "grid_resolution", "seed"});

    AppConfig cfg = AppConfig::defaults();
    if (j.contains("beam")) parse_beam(j.at("beam"), cfg.beam);
    if (j.contains("space")) parse_space(j.at("space"), cfg.space);
    if (j.contains("limit_state"))
        parse_limit_state(j.at("limit_state"), cfg.limit_state);
    if (j.contains("surrogate")) parse_surrogate(j.at("surrogate"), cfg.surrogate);
    if (j.contains("reliability")) {
        const json& jr = j.at("reliability");
        check_keys(jr, "reliability", {"n_reference", "subset"});
        read_field(jr, "reliability", "n_reference", cfg.n_reference);
        if (jr.contains("subset")) parse_subset(jr.at("subset"), cfg.subset);
    }
    if (j.contains("al")) parse_al(j.at("al"), cfg.al);
    read_field(j, "config", "grid_resolution", cfg.grid_resolution);
    read_field(j, "config", "seed", cfg.seed);

    cfg.al.subset = cfg.subset;
    cfg.al.surrogate = cfg.surrogate;
    cfg.al.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

AppConfig load_config(const std::string& path) {
    return parse_config(read_text_file(path));
}

std::string config_to_json(const AppConfig& cfg) {
    json j;
    json loads = json::array();
    for (const auto& load : cfg.beam.loads)
        loads.push_back(
            {{"position", load.position}, {"magnitude", load.magnitude}});
    j["beam"] = {
        {"total_length", cfg.beam.total_length},
        {"fixed_supports", cfg.beam.fixed_supports},
        {"movable_support_count", cfg.beam.movable_support_count},
        {"loads", loads},
        {"elastic_modulus", cfg.beam.elastic_modulus},
        {"shear_modulus", cfg.beam.shear_modulus},
        {"area", cfg.beam.area},
        {"inertia", cfg.beam.inertia},
        {"shear_correction", cfg.beam.shear_correction},
        {"elements_per_span_min", cfg.beam.elements_per_span_min},
        {"beam_theory", cfg.beam.theory == BeamTheory::timoshenko
                            ? "timoshenko"
                            : "euler_bernoulli"}};
    json vars = json::array();
    for (const auto& v : cfg.space.variables)
        vars.push_back({{"name", v.name}, {"lower", v.lower}, {"upper", v.upper}});
    j["space"] = {{"variables", vars}};
    const char* rule = "first_span_over_400";
    if (cfg.limit_state.rule == LimitRule::fixed_value) rule = "fixed_value";
    if (cfg.limit_state.rule == LimitRule::span_max_over_400)
        rule = "span_max_over_400";
    j["limit_state"] = {{"rule", rule},
                        {"fixed_value", cfg.limit_state.fixed_value}};
    j["surrogate"] = {
        {"type",
         cfg.surrogate.kind == SurrogateKind::kriging ? "kriging" : "pck"},
        {"trend",
         {{"kind", cfg.surrogate.trend.kind == TrendKind::polynomial_additive
                       ? "polynomial_additive"
                       : "polynomial_total_degree"},
          {"degree", cfg.surrogate.trend.degree}}},
        {"pck_degree", cfg.surrogate.pck_degree},
        {"correlation",
         {{"nu", matern_nu_to_string(cfg.surrogate.correlation.nu)},
          {"theta_bounds", {cfg.surrogate.correlation.theta_lower,
                            cfg.surrogate.correlation.theta_upper}},
          {"nugget", cfg.surrogate.correlation.nugget}}}};
    j["reliability"] = {{"n_reference", cfg.n_reference},
                        {"subset",
                         {{"p0", cfg.subset.p0},
                          {"n_per_level", cfg.subset.n_per_level},
                          {"max_levels", cfg.subset.max_levels},
                          {"proposal_std", cfg.subset.proposal_std}}}};
    j["al"] = {{"eps_pf", cfg.al.eps_pf},
               {"consecutive_required", cfg.al.consecutive_required},
               {"max_calls", cfg.al.max_calls},
               {"pool_size", cfg.al.pool_size},
               {"batch", cfg.al.batch}};
    j["grid_resolution"] = cfg.grid_resolution;
    j["seed"] = cfg.seed;
    return j.dump(2);
}

}  // namespace akbeam
