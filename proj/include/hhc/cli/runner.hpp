#pragma once

// `verify` and `hunt` drivers. Work items (one per surface) may run on several
// threads; rows come back in item order, so output does not depend on --jobs.

#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hhc/bounds.hpp"
#include "hhc/cli/config.hpp"
#include "hhc/cli/report.hpp"
#include "hhc/convexity.hpp"
#include "hhc/oracle.hpp"
#include "hhc/random.hpp"
#include "hhc/surfaces.hpp"

namespace hhc::cli {

struct RunResult {
    std::vector<ReportRow> rows;
    nlohmann::json summary;
    int exit_code = 0;
};

namespace detail {

template <class Fn>
std::vector<std::vector<ReportRow>> run_items(std::size_t n, int jobs, Fn&& fn) {
    std::vector<std::vector<ReportRow>> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

inline std::string kv(const std::string& k, double v) { return k + '=' + format_number(v); }

inline ReportRow skipped(const std::string& surface, const std::string& theorem, const std::string& variant,
                         std::optional<GenParams> p, const std::string& why) {
    ReportRow r;
    r.surface = surface;
    r.theorem = theorem;
    r.variant = variant;
    r.params = p;
    r.verdict = "skipped";
    r.detail = why;
    return r;
}

inline std::string skip_reason(const std::exception& e) {
    std::string s = e.what();
    for (char& ch : s)
        if (ch == ';' || ch == '\n') ch = ' ';
    return "reason=" + s;
}

inline ReportRow membership_row(const std::string& surface, ConvexityClass cls, std::optional<GenParams> p,
                                const MembershipReport& m) {
    ReportRow r;
    r.surface = surface;
    r.theorem = "membership-" + std::string(to_string(cls));
    r.variant = "-";
    r.params = p;
    r.lhs = m.lhs;
    r.rhs = m.rhs;
    r.slack = m.worst_margin;
    r.verdict = std::string(to_string(m.verdict));
    const Witness& w = m.witness;
    r.detail = kv("x", w[0]) + ';' + kv("y", w[1]) + ';' + kv("z", w[2]) + ';' + kv("w", w[3]) + ';' +
               kv("lambda", w[4]) + ';' + kv("mu", w[5]) + ";samples=" + std::to_string(m.samples_checked);
    return r;
}

inline ReportRow bound_row(const std::string& surface, const BoundReport& b, bool with_params,
                           const MembershipReport& gate, const std::string& extra = {}) {
    ReportRow r;
    r.surface = surface;
    r.theorem = std::string(to_string(b.theorem));
    r.variant = std::string(to_string(b.variant));
    if (with_params) r.params = b.params;
    r.lhs = b.lhs;
    r.rhs = b.rhs;
    r.slack = b.slack;
    r.error_budget = b.error_budget;
    r.verdict = std::string(to_string(b.verdict));
    r.detail = "gate=" + std::string(to_string(gate.verdict)) + ';' + kv("gate_margin", gate.worst_margin) + extra;
    return r;
}

/// Gate for the bound theorems: class membership of |d2f|^q (q = 1 for thm2, thm3).
struct GateCache {
    const Surface& s;
    const Rect& rect;
    const SamplingPlan& plan;
    std::map<GenParams, MembershipReport> cache;

    const MembershipReport& get(const GenParams& p) {
        auto it = cache.find(p);
        if (it != cache.end()) return it->second;
        const Surface g = abs_mixed_partial_power(s, p.q);
        const MembershipReport rep = p == GenParams::classical(p.q) ? check_def1_coordinated(g, rect, plan)
                                                                   : check_class_first(g, rect, p, plan);
        return cache.emplace(p, rep).first->second;
    }
};

/// Theorem rows for one parameter combination, both variants as configured.
inline void theorem_rows(std::vector<ReportRow>& rows, const Surface& s, const RunConfig& cfg, Theorem th,
                         const GenParams& p, const DeviationTerms& dev, GateCache& gates,
                         const std::string& extra = {}) {
    const std::string name = s.name();
    const std::string th_name(to_string(th));
    const bool with_params = th != Theorem::thm2;
    const std::optional<GenParams> row_params = with_params ? std::optional<GenParams>(p) : std::nullopt;
    const MembershipReport* gate = nullptr;
    try {
        gate = &gates.get(p);
    } catch (const DomainError& e) {
        for (Variant v : cfg.variants) {
            if (th == Theorem::thm2 && v != cfg.variants.front()) continue;
            rows.push_back(skipped(name, th_name, std::string(to_string(v)), row_params, skip_reason(e)));
        }
        return;
    }
    for (Variant v : cfg.variants) {
        // thm2 has one form; report it once under the first configured variant
        if (th == Theorem::thm2 && v != cfg.variants.front()) continue;
        try {
            const BoundReport b = evaluate_bound(th, s, cfg.rect, p, th == Theorem::thm2 ? Variant::proof_form : v, dev);
            rows.push_back(bound_row(name, b, with_params, *gate, extra));
        } catch (const DomainError& e) {
            rows.push_back(skipped(name, th_name, std::string(to_string(v)), row_params, skip_reason(e)));
        } catch (const NonFiniteError& e) {
            rows.push_back(skipped(name, th_name, std::string(to_string(v)), row_params, skip_reason(e)));
        }
    }
}

inline std::vector<ReportRow> verify_surface(const Surface& s, const RunConfig& cfg) {
    std::vector<ReportRow> rows;
    const std::string name = s.name();

    std::optional<DeviationTerms> dev;
    std::string dev_error;
    try {
        dev = deviation_terms(s, cfg.rect, cfg.tolerance);
    } catch (const DomainError& e) {
        dev_error = skip_reason(e);
    }

    if (cfg.has(Check::lemma1)) {
        try {
            const Lemma1Check c = check_lemma1(s, cfg.rect, cfg.tolerance);
            ReportRow r;
            r.surface = name;
            r.theorem = "lemma1";
            r.variant = "-";
            r.lhs = c.deviation.signed_deviation;
            r.rhs = c.identity_rhs;
            r.slack = -std::abs(c.residual);
            r.error_budget = c.error_budget;
            r.verdict = std::string(to_string(classify(r.slack, r.error_budget, r.rhs)));
            r.detail = kv("residual", c.residual);
            if (const auto* poly = s.polynomial()) {
                const oracle::RationalRect rr{oracle::Rational(cfg.rect.a), oracle::Rational(cfg.rect.b),
                                              oracle::Rational(cfg.rect.c), oracle::Rational(cfg.rect.d)};
                const oracle::Rational exact = oracle::lemma1_check_exact(*poly, rr);
                r.detail += ';' + std::string(exact == 0 ? "exact_residual=0" : "exact_residual=nonzero");
            }
            rows.push_back(std::move(r));
        } catch (const DomainError& e) {
            rows.push_back(skipped(name, "lemma1", "-", std::nullopt, skip_reason(e)));
        }
    }

    if (cfg.has(Check::thm1_chain)) {
        try {
            const ChainReport c = five_term_chain(s, cfg.rect, cfg.tolerance);
            ReportRow r;
            r.surface = name;
            r.theorem = "thm1-chain";
            r.variant = "-";
            r.lhs = c.values.front();
            r.rhs = c.values.back();
            r.slack = c.worst_gap;
            double budget = 0.0;
            for (double e : c.errors) budget = std::max(budget, e);
            r.error_budget = 2.0 * budget;
            r.verdict = c.monotone ? "holds" : "violated";
            r.detail = "values=";
            for (std::size_t i = 0; i < c.values.size(); ++i)
                r.detail += (i ? " " : "") + format_number(c.values[i]);
            rows.push_back(std::move(r));
        } catch (const DomainError& e) {
            rows.push_back(skipped(name, "thm1-chain", "-", std::nullopt, skip_reason(e)));
        }
    }

    const auto membership = [&](ConvexityClass cls, std::optional<GenParams> p) {
        try {
            const GenParams gp = p.value_or(GenParams::classical());
            MembershipReport m;
            switch (cls) {
                case ConvexityClass::coordinated: m = check_def1_coordinated(s, cfg.rect, cfg.plan); break;
                case ConvexityClass::first_sense: m = check_class_first(s, cfg.rect, gp, cfg.plan); break;
                case ConvexityClass::second_sense: m = check_class_second(s, cfg.rect, gp, cfg.plan); break;
            }
            rows.push_back(membership_row(name, cls, p, m));
        } catch (const DomainError& e) {
            rows.push_back(skipped(name, "membership-" + std::string(to_string(cls)), "-", p, skip_reason(e)));
        }
    };

    if (cfg.has(Check::membership)) membership(ConvexityClass::coordinated, std::nullopt);

    const bool any_theorem =
        cfg.has(Check::thm2) || cfg.has(Check::thm3) || cfg.has(Check::thm4) || cfg.has(Check::thm5);
    if (any_theorem && !dev) {
        for (Check c : {Check::thm2, Check::thm3, Check::thm4, Check::thm5})
            if (cfg.has(c)) rows.push_back(skipped(name, std::string(to_string(c)), "-", std::nullopt, dev_error));
        return rows;
    }

    GateCache gates{s, cfg.rect, cfg.plan, {}};
    if (cfg.has(Check::thm2)) theorem_rows(rows, s, cfg, Theorem::thm2, GenParams::classical(), *dev, gates);

    for (const GenParams& p : cfg.params.expand_without_q()) {
        if (cfg.has(Check::membership)) {
            membership(ConvexityClass::first_sense, p);
            membership(ConvexityClass::second_sense, p);
        }
        if (cfg.has(Check::thm3)) theorem_rows(rows, s, cfg, Theorem::thm3, p, *dev, gates);
    }
    for (const GenParams& p : cfg.params.expand()) {
        if (cfg.has(Check::thm4) && p.q > 1.0) theorem_rows(rows, s, cfg, Theorem::thm4, p, *dev, gates);
        if (cfg.has(Check::thm5)) theorem_rows(rows, s, cfg, Theorem::thm5, p, *dev, gates);
    }
    return rows;
}

inline bool is_bound_row(const ReportRow& r) {
    return r.theorem == "thm2" || r.theorem == "thm3" || r.theorem == "thm4" || r.theorem == "thm5";
}

inline bool gated(const ReportRow& r) {
    return detail_field(r.detail, "gate") == std::optional<std::string>("no-violation-found");
}

inline nlohmann::json summarize(const std::string& command, const RunConfig& cfg,
                                const std::vector<ReportRow>& rows, double seconds) {
    nlohmann::json counts = nlohmann::json::object();
    nlohmann::json by_check = nlohmann::json::object();
    std::optional<double> worst;
    int proof_violations = 0;
    nlohmann::json as_written = {{"thm3", 0}, {"thm4", 0}, {"thm5", 0}};
    auto bump = [](nlohmann::json& obj, const std::string& key) {
        obj[key] = obj.contains(key) ? obj[key].get<int>() + 1 : 1;
    };
    for (const auto& r : rows) {
        bump(counts, r.verdict);
        if (!by_check.contains(r.theorem)) by_check[r.theorem] = nlohmann::json::object();
        bump(by_check[r.theorem], r.verdict);
        if (!is_bound_row(r) || r.verdict == "skipped") continue;
        if (r.variant == "proof-form" && (!worst || r.slack < *worst)) worst = r.slack;
        if (r.verdict == "violated" && gated(r)) {
            if (r.variant == "proof-form") ++proof_violations;
            else if (as_written.contains(r.theorem)) as_written[r.theorem] = as_written[r.theorem].get<int>() + 1;
        }
    }
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    nlohmann::json j;
    j["command"] = command;
    j["seed"] = cfg.seed;
    j["rows"] = rows.size();
    j["counts"] = counts;
    j["counts_by_check"] = by_check;
    j["worst_proof_form_slack"] = worst ? nlohmann::json(*worst) : nlohmann::json(nullptr);
    j["proof_form_violations"] = proof_violations;
    j["as_written_violations"] = as_written;
    j["wall_time_seconds"] = seconds;
    j["finished_at"] = stamp;
    return j;
}

inline RunResult finish(const std::string& command, const RunConfig& cfg,
                        std::vector<std::vector<ReportRow>> parts,
                        std::chrono::steady_clock::time_point start) {
    RunResult res;
    for (auto& part : parts)
        for (auto& r : part) res.rows.push_back(std::move(r));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.summary = summarize(command, cfg, res.rows, seconds);
    res.exit_code = res.summary["proof_form_violations"].get<int>() > 0 ? 1 : 0;
    return res;
}

}  // namespace detail

inline RunResult run_verify(const RunConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    auto parts = detail::run_items(cfg.surfaces.size(), cfg.jobs, [&](std::size_t i) {
        return detail::verify_surface(corpus_surface(cfg.surfaces[i]), cfg);
    });
    return detail::finish("verify", cfg, std::move(parts), start);
}

/// Random polynomial with integer coefficients in [1, max_coeff]; always has an xy-type term.
inline oracle::RationalPoly2 random_hunt_polynomial(Rng& rng, const HuntConfig& h) {
    oracle::RationalPoly2 p;
    bool mixed = false;
    for (int i = 0; i <= h.max_degree; ++i)
        for (int j = 0; j <= h.max_degree; ++j)
            if (rng.uniform() < 0.5) {
                p.add_term(i, j, oracle::Rational(rng.between(1, h.max_coeff)));
                mixed = mixed || (i > 0 && j > 0);
            }
    if (!mixed) p.add_term(1, 1, oracle::Rational(1));
    return p;
}

/// Domain large enough for every scaled corner of the sweep.
inline Rect hunt_domain(const RunConfig& cfg) {
    const double m1 = *std::min_element(cfg.params.m1.begin(), cfg.params.m1.end());
    const double m2 = *std::min_element(cfg.params.m2.begin(), cfg.params.m2.end());
    const Rect& r = cfg.rect;
    const double xs[] = {r.a, r.b, r.a / m1, r.b / m1};
    const double ys[] = {r.c, r.d, r.c / m2, r.d / m2};
    return Rect{*std::min_element(std::begin(xs), std::end(xs)) - 1.0,
                *std::max_element(std::begin(xs), std::end(xs)) + 1.0,
                *std::min_element(std::begin(ys), std::end(ys)) - 1.0,
                *std::max_element(std::begin(ys), std::end(ys)) + 1.0};
}

inline RunResult run_hunt(const RunConfig& cfg) {
    cfg.validate(false);
    if (!cfg.has(Variant::as_written)) throw ConfigError("hunt requires the as-written variant");
    if (!cfg.has(Check::thm3) && !cfg.has(Check::thm4) && !cfg.has(Check::thm5))
        throw ConfigError("hunt needs at least one of thm3, thm4, thm5");
    const auto start = std::chrono::steady_clock::now();

    Rng rng(cfg.seed);
    const Rect domain = hunt_domain(cfg);
    std::vector<Surface> surfaces;
    for (int k = 0; k < cfg.hunt.polynomials; ++k)
        surfaces.push_back(Surface::from_polynomial("hunt" + std::to_string(k),
                                                    random_hunt_polynomial(rng, cfg.hunt), domain));

    auto parts = detail::run_items(surfaces.size(), cfg.jobs, [&](std::size_t i) {
        const Surface& s = surfaces[i];
        std::vector<ReportRow> rows;
        const std::string poly = ";poly=" + s.polynomial()->to_string();
        const DeviationTerms dev = deviation_terms(s, cfg.rect, cfg.tolerance);
        detail::GateCache gates{s, cfg.rect, cfg.plan, {}};
        if (cfg.has(Check::thm3))
            for (const GenParams& p : cfg.params.expand_without_q())
                detail::theorem_rows(rows, s, cfg, Theorem::thm3, p, dev, gates, poly);
        for (const GenParams& p : cfg.params.expand()) {
            if (cfg.has(Check::thm4) && p.q > 1.0) detail::theorem_rows(rows, s, cfg, Theorem::thm4, p, dev, gates, poly);
            if (cfg.has(Check::thm5)) detail::theorem_rows(rows, s, cfg, Theorem::thm5, p, dev, gates, poly);
        }
        return rows;
    });
    return detail::finish("hunt", cfg, std::move(parts), start);
}

/// Writes <dir>/<stem>.csv and <dir>/<stem>_summary.json.
inline void write_outputs(const RunResult& res, const std::filesystem::path& dir, const std::string& stem) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir / (stem + ".csv"), std::ios::binary);
        if (!csv) throw Error("cannot write " + (dir / (stem + ".csv")).string());
        write_csv(csv, res.rows);
    }
    std::ofstream js(dir / (stem + "_summary.json"), std::ios::binary);
    if (!js) throw Error("cannot write " + (dir / (stem + "_summary.json")).string());
    js << res.summary.dump(2) << '\n';
}

}  // namespace hhc::cli
