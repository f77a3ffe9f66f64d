// hhc: batch front-end.
//
//   hhc verify --config configs/golden.yaml [--seed N] [--out DIR] [--jobs N]
//   hhc hunt   --config configs/hunt.yaml   [--seed N] [--out DIR] [--jobs N]
//   hhc corpus
//   hhc constants [--from 0] [--to 1] [--steps 10]
//
// Output directory: --out, else $HHC_OUT_DIR, else output_dir from the config.
// Exit codes: 0 clean, 1 proof-form violation on a gated input, 2 usage or config error.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hhc/cli/config.hpp"
#include "hhc/cli/report.hpp"
#include "hhc/cli/runner.hpp"

namespace {

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> jobs;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
    cmd->add_option("--config", o.config, "YAML run configuration")->required();
    cmd->add_option("--seed", o.seed, "override the config seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
}

int run(const std::string& command, const RunOptions& o) {
    using namespace hhc::cli;
    RunConfig cfg = load_config(o.config);
    if (o.seed) {
        cfg.seed = *o.seed;
        cfg.plan.seed = *o.seed;
    }
    if (o.jobs) cfg.jobs = *o.jobs;
    std::string dir = cfg.output_dir;
    if (const char* env = std::getenv("HHC_OUT_DIR"); env && *env) dir = env;
    if (o.out) dir = *o.out;

    const RunResult res = command == "verify" ? run_verify(cfg) : run_hunt(cfg);
    write_outputs(res, dir, command);
    const auto& s = res.summary;
    std::cout << command << ": " << s["rows"].get<std::size_t>() << " rows, " << s["counts"].dump()
              << ", proof-form violations " << s["proof_form_violations"].get<int>()
              << ", as-written violations " << s["as_written_violations"].dump() << " -> " << dir << '\n';
    return res.exit_code;
}

void print_corpus() {
    for (const auto& s : hhc::corpus()) {
        std::cout << s.name() << "  " << s.formula() << "  domain " << s.domain()
                  << (s.polynomial() ? "  polynomial" : "") << '\n';
    }
}

void print_constants(double from, double to, int steps) {
    std::cout << "theta,B(theta)\n";
    for (int i = 0; i <= steps; ++i) {
        const double t = steps == 0 ? from : from + (to - from) * i / steps;
        std::cout << hhc::cli::format_number(t) << ',' << hhc::cli::format_number(hhc::const_b(t)) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hermite-Hadamard co-ordinated bounds: verification and counterexample search"};
    app.require_subcommand(1);

    RunOptions verify_opts, hunt_opts;
    auto* verify = app.add_subcommand("verify", "run the configured checks over the corpus");
    add_run_options(verify, verify_opts);
    auto* hunt = app.add_subcommand("hunt", "search random polynomials for as-written bound violations");
    add_run_options(hunt, hunt_opts);
    app.add_subcommand("corpus", "list registered surfaces");
    double from = 0.0, to = 1.0;
    int steps = 10;
    auto* constants = app.add_subcommand("constants", "print B(theta) over a grid of theta in [0,1]");
    constants->add_option("--from", from)->check(CLI::Range(0.0, 1.0));
    constants->add_option("--to", to)->check(CLI::Range(0.0, 1.0));
    constants->add_option("--steps", steps)->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*verify) return run("verify", verify_opts);
        if (*hunt) return run("hunt", hunt_opts);
        if (app.got_subcommand("corpus")) {
            print_corpus();
            return 0;
        }
        if (*constants) {
            print_constants(from, to, steps);
            return 0;
        }
    } catch (const hhc::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const hhc::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
