#pragma once

// Run configuration for the batch front-end, read from a YAML file.
//
//   surfaces: [x2y2, exp_x_plus_y]   # or: all | polynomials
//   rect: [0, 1, 0, 1]               # a, b, c, d
//   params:                          # every list non-empty; the sweep is their product
//     s1: [1]
//     s2: [1]
//     alpha1: [1]
//     alpha2: [1]
//     m1: [1]
//     m2: [1]
//     q: [1, 2]
//   variants: [proof-form, as-written]
//   checks: [lemma1, thm1-chain, thm2, thm3, thm4, thm5, membership]
//   plan: {grid_per_axis: 9, random_trials: 10000, tolerance: 1.0e-9}
//   tolerance: {rel: 1.0e-10, abs: 1.0e-12, max_depth: 20}
//   hunt: {polynomials: 20, max_degree: 3, max_coeff: 4}
//   output_dir: hhc_out
//   seed: 42
//   jobs: 1

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "hhc/bounds.hpp"
#include "hhc/convexity.hpp"
#include "hhc/error.hpp"
#include "hhc/surfaces.hpp"
#include "hhc/types.hpp"

namespace hhc::cli {

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Check { lemma1, thm1_chain, thm2, thm3, thm4, thm5, membership };

inline std::string_view to_string(Check c) {
    switch (c) {
        case Check::lemma1: return "lemma1";
        case Check::thm1_chain: return "thm1-chain";
        case Check::thm2: return "thm2";
        case Check::thm3: return "thm3";
        case Check::thm4: return "thm4";
        case Check::thm5: return "thm5";
        case Check::membership: return "membership";
    }
    return "?";
}

inline Check parse_check(std::string_view s) {
    for (Check c : {Check::lemma1, Check::thm1_chain, Check::thm2, Check::thm3, Check::thm4,
                    Check::thm5, Check::membership})
        if (to_string(c) == s) return c;
    throw ConfigError("unknown check '" + std::string(s) + "'");
}

inline Variant parse_variant(std::string_view s) {
    if (s == "proof-form") return Variant::proof_form;
    if (s == "as-written") return Variant::as_written;
    throw ConfigError("unknown variant '" + std::string(s) + "' (expected proof-form or as-written)");
}

struct ParamGrid {
    std::vector<double> s1{1.0}, s2{1.0}, alpha1{1.0}, alpha2{1.0}, m1{1.0}, m2{1.0}, q{1.0};

    /// Cartesian product, q varying fastest.
    std::vector<GenParams> expand() const {
        std::vector<GenParams> out;
        for (double a : s1)
            for (double b : s2)
                for (double c : alpha1)
                    for (double d : alpha2)
                        for (double e : m1)
                            for (double f : m2)
                                for (double g : q) out.push_back(GenParams{a, b, c, d, e, f, g});
        return out;
    }

    /// Distinct (s, alpha, m) combinations in sweep order, with q = 1.
    std::vector<GenParams> expand_without_q() const {
        std::vector<GenParams> out;
        for (GenParams p : expand()) {
            p.q = 1.0;
            if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
        }
        return out;
    }
};

struct HuntConfig {
    int polynomials = 20;
    int max_degree = 3;
    int max_coeff = 4;
};

struct RunConfig {
    std::vector<std::string> surfaces;
    Rect rect{0.0, 1.0, 0.0, 1.0};
    ParamGrid params;
    std::vector<Variant> variants{Variant::proof_form};
    std::vector<Check> checks{Check::lemma1, Check::thm1_chain, Check::thm2, Check::thm3,
                              Check::thm4,  Check::thm5,       Check::membership};
    SamplingPlan plan;
    Tolerance tolerance;
    HuntConfig hunt;
    std::string output_dir = "hhc_out";
    std::uint64_t seed = 42;
    int jobs = 1;

    bool has(Check c) const { return std::find(checks.begin(), checks.end(), c) != checks.end(); }
    bool has(Variant v) const { return std::find(variants.begin(), variants.end(), v) != variants.end(); }

    /// Surfaces are optional for `hunt`, which generates its own.
    void validate(bool require_surfaces = true) const {
        if (require_surfaces && surfaces.empty()) throw ConfigError("no surfaces selected");
        for (const auto& name : surfaces)
            if (!find_surface(name)) throw ConfigError("unknown surface '" + name + "'");
        if (!rect.valid()) throw ConfigError("rect must satisfy a < b and c < d");
        for (const auto* list : {&params.s1, &params.s2, &params.alpha1, &params.alpha2, &params.m1,
                                 &params.m2, &params.q})
            if (list->empty()) throw ConfigError("no parameters to sweep");
        for (const GenParams& p : params.expand()) {
            try {
                p.validate();
            } catch (const ParameterError& e) {
                throw ConfigError(std::string("invalid parameter grid: ") + e.what());
            }
        }
        if (variants.empty()) throw ConfigError("no variants selected");
        if (checks.empty()) throw ConfigError("no checks selected");
        try {
            plan.validate();
        } catch (const ParameterError& e) {
            throw ConfigError(std::string("invalid plan: ") + e.what());
        }
        if (!(tolerance.rel > 0 && tolerance.abs >= 0 && tolerance.max_depth > 0))
            throw ConfigError("invalid tolerance");
        if (jobs < 1) throw ConfigError("jobs must be >= 1");
        if (hunt.polynomials < 1 || hunt.max_degree < 1 || hunt.max_coeff < 1)
            throw ConfigError("hunt needs polynomials, max_degree and max_coeff >= 1");
    }
};

namespace detail {

inline void reject_unknown_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed,
                                std::string_view where) {
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
}

inline std::vector<double> number_list(const YAML::Node& node, std::string_view key) {
    if (node.IsScalar()) return {node.as<double>()};
    if (!node.IsSequence()) throw ConfigError("params." + std::string(key) + " must be a list");
    std::vector<double> out;
    for (const auto& v : node) out.push_back(v.as<double>());
    return out;
}

inline std::vector<std::string> string_list(const YAML::Node& node) {
    if (node.IsScalar()) return {node.as<std::string>()};
    std::vector<std::string> out;
    for (const auto& v : node) out.push_back(v.as<std::string>());
    return out;
}

inline std::vector<std::string> resolve_surfaces(const std::vector<std::string>& names) {
    std::vector<std::string> out;
    auto add = [&](const std::string& n) {
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    };
    for (const auto& n : names) {
        if (n == "all") {
            for (const auto& s : corpus()) add(s.name());
        } else if (n == "polynomials") {
            for (const auto& s : corpus())
                if (s.polynomial()) add(s.name());
        } else {
            add(n);
        }
    }
    return out;
}

}  // namespace detail

inline RunConfig parse_config(const YAML::Node& root) {
    if (!root.IsMap()) throw ConfigError("config must be a mapping");
    RunConfig cfg;
    try {
        detail::reject_unknown_keys(root,
                                    {"surfaces", "rect", "params", "variants", "checks", "plan", "tolerance",
                                     "hunt", "output_dir", "seed", "jobs"},
                                    "config");
        if (root["surfaces"]) cfg.surfaces = detail::resolve_surfaces(detail::string_list(root["surfaces"]));
        if (const auto r = root["rect"]) {
            if (!r.IsSequence() || r.size() != 4) throw ConfigError("rect must be [a, b, c, d]");
            cfg.rect = Rect{r[0].as<double>(), r[1].as<double>(), r[2].as<double>(), r[3].as<double>()};
        }
        if (const auto p = root["params"]) {
            if (!p.IsMap()) throw ConfigError("params must be a mapping");
            detail::reject_unknown_keys(p, {"s1", "s2", "alpha1", "alpha2", "m1", "m2", "q"}, "params");
            auto take = [&](const char* key, std::vector<double>& dst) {
                if (p[key]) dst = detail::number_list(p[key], key);
            };
            take("s1", cfg.params.s1);
            take("s2", cfg.params.s2);
            take("alpha1", cfg.params.alpha1);
            take("alpha2", cfg.params.alpha2);
            take("m1", cfg.params.m1);
            take("m2", cfg.params.m2);
            take("q", cfg.params.q);
        }
        if (root["variants"]) {
            cfg.variants.clear();
            for (const auto& v : detail::string_list(root["variants"])) cfg.variants.push_back(parse_variant(v));
        }
        if (root["checks"]) {
            cfg.checks.clear();
            for (const auto& c : detail::string_list(root["checks"])) cfg.checks.push_back(parse_check(c));
        }
        if (const auto pl = root["plan"]) {
            detail::reject_unknown_keys(pl, {"grid_per_axis", "random_trials", "tolerance"}, "plan");
            if (pl["grid_per_axis"]) cfg.plan.grid_per_axis = pl["grid_per_axis"].as<int>();
            if (pl["random_trials"]) cfg.plan.random_trials = pl["random_trials"].as<int>();
            if (pl["tolerance"]) cfg.plan.tolerance = pl["tolerance"].as<double>();
        }
        if (const auto t = root["tolerance"]) {
            detail::reject_unknown_keys(t, {"rel", "abs", "max_depth"}, "tolerance");
            if (t["rel"]) cfg.tolerance.rel = t["rel"].as<double>();
            if (t["abs"]) cfg.tolerance.abs = t["abs"].as<double>();
            if (t["max_depth"]) cfg.tolerance.max_depth = t["max_depth"].as<int>();
        }
        if (const auto h = root["hunt"]) {
            detail::reject_unknown_keys(h, {"polynomials", "max_degree", "max_coeff"}, "hunt");
            if (h["polynomials"]) cfg.hunt.polynomials = h["polynomials"].as<int>();
            if (h["max_degree"]) cfg.hunt.max_degree = h["max_degree"].as<int>();
            if (h["max_coeff"]) cfg.hunt.max_coeff = h["max_coeff"].as<int>();
        }
        if (root["output_dir"]) cfg.output_dir = root["output_dir"].as<std::string>();
        if (root["seed"]) cfg.seed = root["seed"].as<std::uint64_t>();
        if (root["jobs"]) cfg.jobs = root["jobs"].as<int>();
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    cfg.plan.seed = cfg.seed;
    return cfg;
}

inline RunConfig parse_config_string(const std::string& text) {
    try {
        return parse_config(YAML::Load(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

inline RunConfig load_config(const std::string& path) {
    try {
        return parse_config(YAML::LoadFile(path));
    } catch (const YAML::BadFile&) {
        throw ConfigError("cannot read config file '" + path + "'");
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

}  // namespace hhc::cli
