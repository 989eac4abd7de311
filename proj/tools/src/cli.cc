#include "cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include "crosscheck.h"
#include "enverify/analytic.h"
#include "enverify/dense_sim.h"
#include "enverify/errors.h"
#include "enverify/oracle.h"
#include "enverify/protocol.h"
#include "enverify/state_io.h"
#include "json_config.h"
#include "output.h"
#include "reproduce.h"

namespace enverify::cli {

namespace {

using nlohmann::ordered_json;

struct StrategyArgs {
    int n = -1;
    int m = 0;
    int m_embed = 0;
};

// Fills in the defaults a bare `--strategy X --n N` implies.
StrategySpec make_spec(StrategyKind kind, const StrategyArgs &a) {
    const int n = a.n;
    auto digits = [&] { return ceil_log2(static_cast<long>(std::max(n, 0)) + 1); };
    switch (kind) {
        case StrategyKind::Rank2Full:
            return StrategySpec::rank2_full(n);
        case StrategyKind::Rank2Subspace:
            return StrategySpec::rank2_subspace(n, a.m > 0 ? a.m : 1);
        case StrategyKind::WernerFull:
            return StrategySpec::werner_full(n);
        case StrategyKind::WernerSubspace:
            return StrategySpec::werner_subspace(n, a.m > 0 ? a.m : 1);
        case StrategyKind::DirectEmbedMeasure:
            return StrategySpec::direct_embed_measure(a.m_embed > 0 ? a.m_embed : 1);
        case StrategyKind::EmbedEng:
            return StrategySpec::embed_eng(n, a.m_embed > 0 ? a.m_embed : digits());
        case StrategyKind::EmbedEngSubspace:
            return StrategySpec::embed_eng_subspace(n, a.m_embed > 0 ? a.m_embed : digits(), a.m > 0 ? a.m : 1);
        case StrategyKind::SingleCopyBaseline:
            return StrategySpec::single_copy(n);
    }
    throw DomainError("unknown strategy");
}

bool rank2_family(StrategyKind kind) {
    return kind == StrategyKind::Rank2Full || kind == StrategyKind::Rank2Subspace;
}

NoiseModel make_noise(const std::string &name, StrategyKind kind, const Rational &f, int dim) {
    std::string resolved = name;
    if (resolved == "auto") {
        resolved = rank2_family(kind) ? "rank2" : "werner";
    }
    if (resolved == "pure") {
        return NoiseModel::pure_target();
    }
    if (resolved == "rank2") {
        return NoiseModel::rank2(f);
    }
    if (resolved == "werner") {
        return NoiseModel::werner(f);
    }
    if (resolved == "isotropic") {
        return NoiseModel::isotropic_qudit(dim, fidelity_to_q(f, dim));
    }
    throw DomainError("unknown noise model '" + name + "'");
}

// Closed form when the noise matches the strategy family, exact enumeration
// otherwise; empty when neither is available.
std::optional<double> reference_failure(const StrategySpec &spec, const NoiseModel &noise) {
    const bool matches = (noise.kind() == NoiseModel::Kind::Rank2 && rank2_family(spec.kind)) ||
                         (noise.kind() == NoiseModel::Kind::Werner && !rank2_family(spec.kind));
    if (matches) {
        if (spec.n <= 64) {
            return to_double(strategy_failure(spec, noise.fidelity()));
        }
        return strategy_failure(spec, to_double(noise.fidelity()));
    }
    try {
        return to_double(enumerate_strategy_failure(spec, noise));
    } catch (const ResourceError &) {
        return std::nullopt;
    }
}

std::ofstream open_output(const std::string &dir, const std::string &name, std::string &path) {
    std::filesystem::create_directories(dir);
    path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DomainError("cannot write " + path);
    }
    return out;
}

std::vector<Rational> parse_all(const std::vector<std::string> &texts) {
    std::vector<Rational> out;
    for (const auto &t : texts) {
        out.push_back(parse_rational(t));
    }
    return out;
}

// ---- analytic --------------------------------------------------------------

struct AnalyticArgs {
    std::string strategy;
    std::string fidelity;
    StrategyArgs shape;
    std::optional<double> delta_target;
    bool exact = false;
};

void cmd_analytic(const AnalyticArgs &a, std::ostream &out) {
    const StrategyKind kind = parse_strategy_kind(a.strategy);
    const Rational f = parse_rational(a.fidelity);
    ordered_json j;
    j["strategy"] = to_string(kind);
    j["F"] = to_double(f);
    if (a.delta_target && a.shape.n < 0) {
        StrategyArgs shape = a.shape;
        shape.n = 1;
        auto report = copies_required(make_spec(kind, shape), to_double(f), *a.delta_target);
        j["delta_target"] = *a.delta_target;
        j["n"] = report.strategy.n;
        j["m"] = report.strategy.m;
        j["m_embed"] = report.strategy.m_embed;
        j["ensemble_size"] = report.ensemble_size;
        j["delta"] = report.delta;
        if (a.exact) {
            j["delta_exact"] = to_string(strategy_failure(report.strategy, f));
        }
        j["copies"] = report.copies_consumed;
        j["copies_consumed"] = report.copies_consumed;
        j["ebits_consumed"] = report.ebits_consumed;
    } else {
        if (a.shape.n < 0 && kind != StrategyKind::DirectEmbedMeasure) {
            throw DomainError("analytic needs --n (or --delta to search for the ensemble size)");
        }
        StrategyArgs shape = a.shape;
        if (kind == StrategyKind::DirectEmbedMeasure) {
            shape.n = 0;
        }
        const StrategySpec spec = make_spec(kind, shape);
        spec.validate();
        auto use = nominal_resources(spec);
        j["n"] = spec.n;
        j["m"] = spec.m;
        j["m_embed"] = spec.m_embed;
        if (a.exact) {
            Rational delta = strategy_failure(spec, f);
            j["delta"] = to_double(delta);
            j["delta_exact"] = to_string(delta);
        } else {
            j["delta"] = strategy_failure(spec, to_double(f));
        }
        j["copies"] = use.copies_consumed;
        j["copies_consumed"] = use.copies_consumed;
        j["ebits_consumed"] = use.ebits_consumed;
    }
    j["mode"] = a.exact ? "exact" : "float";
    out << j.dump(2) << "\n";
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
    std::vector<std::string> strategies;
    std::string noise = "auto";
    int dim = 3;
    std::vector<std::string> fidelities;
    std::vector<int> ns;
    int m = 0;
    int m_embed = 0;
    uint64_t trials = 100000;
    uint64_t seed = 1;
    int workers = 1;
    std::string method = "monte-carlo";
    std::string out_dir;
};

void cmd_simulate(const SimulateArgs &a, std::ostream &out) {
    if (a.workers < 1) {
        throw DomainError("--workers must be >= 1");
    }
    std::vector<CsvRow> rows;
    for (const auto &name : a.strategies) {
        const StrategyKind kind = parse_strategy_kind(name);
        for (const auto &text : a.fidelities) {
            const Rational f = parse_rational(text);
            const NoiseModel noise = make_noise(a.noise, kind, f, a.dim);
            for (int n : a.ns) {
                const StrategySpec spec = make_spec(kind, {kind == StrategyKind::DirectEmbedMeasure ? 0 : n, a.m, a.m_embed});
                spec.validate(noise.local_dim());
                auto use = nominal_resources(spec);
                CsvRow row;
                row.strategy = to_string(kind);
                row.fidelity = to_double(noise.fidelity());
                row.n = spec.n;
                row.m = spec.m;
                row.m_embed = spec.m_embed;
                row.delta = reference_failure(spec, noise);
                row.copies_consumed = use.copies_consumed;
                row.ebits_consumed = use.ebits_consumed;
                row.method = a.method;
                if (a.method == "monte-carlo") {
                    auto est = monte_carlo(spec, noise, a.trials, a.seed, a.workers);
                    auto [lo, hi] = wilson_interval(est.accepted, est.trials);
                    row.trials = est.trials;
                    row.estimate = est.estimate;
                    row.ci_low = lo;
                    row.ci_high = hi;
                    row.seed = a.seed;
                } else if (a.method == "oracle") {
                    row.estimate = to_double(enumerate_strategy_failure(spec, noise));
                } else if (a.method == "dense") {
                    row.estimate = dense_strategy_acceptance(spec, noise);
                } else {
                    throw DomainError("unknown method '" + a.method + "' (monte-carlo, oracle, dense)");
                }
                rows.push_back(std::move(row));
            }
        }
    }
    if (a.out_dir.empty()) {
        write_csv(out, rows);
        return;
    }
    std::string path;
    auto file = open_output(a.out_dir, "simulate.csv", path);
    write_csv(file, rows);
    out << path << "\n";
}

// ---- reproduce -------------------------------------------------------------

struct ReproduceArgs {
    std::vector<std::string> figures;
    std::string out_dir = ".";
    std::vector<std::string> fidelities;
    double delta = 0.1;
};

void cmd_reproduce(const ReproduceArgs &a, std::ostream &out) {
    std::vector<double> grid;
    if (a.fidelities.empty()) {
        grid = default_fidelity_grid();
    } else {
        for (const auto &r : parse_all(a.fidelities)) {
            grid.push_back(to_double(r));
        }
    }
    std::vector<std::string> figures = a.figures;
    if (figures.size() == 1 && figures[0] == "all") {
        figures = {"2a", "2b", "app-c"};
    }
    for (const auto &figure : figures) {
        for (const auto &path : reproduce_figure(figure, a.out_dir, grid, a.delta)) {
            out << path << "\n";
        }
    }
}

// ---- crosscheck ------------------------------------------------------------

struct CrosscheckArgs {
    int max_n = 6;
    std::vector<std::string> fidelities = {"0.5", "0.7", "0.9", "0.99"};
    uint64_t trials = 200000;
    uint64_t seed = 1;
    int workers = 1;
    bool inject_fault = false;
};

int cmd_crosscheck(const CrosscheckArgs &a, std::ostream &out) {
    if (a.max_n < 1 || a.max_n > 12) {
        throw DomainError("--max-n must lie in [1, 12]");
    }
    CrosscheckOptions options;
    options.max_n = a.max_n;
    options.fidelities = parse_all(a.fidelities);
    options.trials = a.trials;
    options.seed = a.seed;
    options.workers = a.workers;
    options.inject_fault = a.inject_fault;
    auto results = run_crosscheck(options);
    print_report(out, results);
    for (const auto &r : results) {
        if (!r.passed) {
            return kCrosscheckFailure;
        }
    }
    return kOk;
}

// ---- dump-state ------------------------------------------------------------

struct DumpArgs {
    std::string noise = "werner";
    std::string fidelity = "0.9";
    int n = 1;
    int d = 0;
    std::string out_file;
};

void cmd_dump_state(const DumpArgs &a, std::ostream &out) {
    const NoiseModel noise = make_noise(a.noise, StrategyKind::WernerFull, parse_rational(a.fidelity), 3);
    if (noise.local_dim() != 2) {
        throw DomainError("dump-state supports qubit ensembles");
    }
    const int d = a.d > 0 ? a.d : a.n + 1;
    MixedState state = ensemble_state(noise, a.n).tensor(MixedState(make_qudit_bell(d, 0, 0, "AX", "BX")));
    auto pairs = ensemble_pairs(a.n);
    state = apply_eng(state, pairs, {"AX", "BX"});
    Eigen::MatrixXcd rho = state.density_matrix();
    std::ofstream file(a.out_file, std::ios::binary);
    if (!file) {
        throw DomainError("cannot write " + a.out_file);
    }
    write_density(file, state.layout(), rho);
    ordered_json j;
    j["file"] = a.out_file;
    j["kind"] = "density";
    std::vector<std::string> names;
    std::vector<int> dims;
    for (const auto &s : state.layout()) {
        names.push_back(s.name);
        dims.push_back(s.dim);
    }
    j["subsystems"] = names;
    j["dims"] = dims;
    j["trace"] = rho.trace().real();
    out << j.dump(2) << "\n";
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Collective verification of entangled-state ensembles"};
    app.name("enverify");
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file with option values (nested objects per subcommand)");

    const std::vector<std::string> strategy_names = {"rank2-full",   "rank2-subspace", "werner-full",
                                                     "werner-subspace", "direct-embed", "embed-eng",
                                                     "embed-eng-subspace", "single-copy"};

    AnalyticArgs analytic;
    auto *analytic_cmd = app.add_subcommand("analytic", "Closed-form failure probability and resource use (JSON)");
    analytic_cmd->add_option("--strategy", analytic.strategy, "Strategy")->required()->check(CLI::IsMember(strategy_names));
    analytic_cmd->add_option("--fidelity,-F", analytic.fidelity, "Fidelity F (decimal or p/q)")->required();
    analytic_cmd->add_option("--n", analytic.shape.n, "Ensemble size");
    analytic_cmd->add_option("--m", analytic.shape.m, "Parity rounds for subspace strategies");
    analytic_cmd->add_option("--m-embed", analytic.shape.m_embed, "Copies embedded into the auxiliary register");
    analytic_cmd->add_option("--delta", analytic.delta_target, "Target failure probability: search the smallest ensemble");
    analytic_cmd->add_flag("--exact", analytic.exact, "Rational arithmetic");

    SimulateArgs simulate;
    auto *simulate_cmd = app.add_subcommand("simulate", "Monte Carlo, oracle or dense acceptance estimates (CSV)");
    simulate_cmd->add_option("--strategy", simulate.strategies, "Strategies to sweep")->required()->check(CLI::IsMember(strategy_names));
    simulate_cmd->add_option("--noise", simulate.noise, "auto, pure, rank2, werner or isotropic")
        ->check(CLI::IsMember({"auto", "pure", "rank2", "werner", "isotropic"}));
    simulate_cmd->add_option("--dim", simulate.dim, "Local dimension for isotropic qudit noise");
    simulate_cmd->add_option("--fidelity,-F", simulate.fidelities, "Fidelities to sweep")->required();
    simulate_cmd->add_option("--n", simulate.ns, "Ensemble sizes to sweep")->required();
    simulate_cmd->add_option("--m", simulate.m, "Parity rounds for subspace strategies");
    simulate_cmd->add_option("--m-embed", simulate.m_embed, "Copies embedded into the auxiliary register");
    simulate_cmd->add_option("--trials", simulate.trials, "Monte Carlo trials")->capture_default_str();
    simulate_cmd->add_option("--seed", simulate.seed, "64-bit seed")->capture_default_str();
    simulate_cmd->add_option("--workers", simulate.workers, "Monte Carlo threads")->capture_default_str();
    simulate_cmd->add_option("--method", simulate.method, "monte-carlo, oracle or dense")
        ->check(CLI::IsMember({"monte-carlo", "oracle", "dense"}))
        ->capture_default_str();
    simulate_cmd->add_option("--out", simulate.out_dir, "Directory for simulate.csv (stdout when omitted)");

    ReproduceArgs reproduce;
    auto *reproduce_cmd = app.add_subcommand("reproduce", "Write the figure datasets as CSV");
    reproduce_cmd->add_option("--figure", reproduce.figures, "2a, 2b, app-c or all")
        ->required()
        ->check(CLI::IsMember({"2a", "2b", "app-c", "all"}));
    reproduce_cmd->add_option("--out", reproduce.out_dir, "Output directory")->capture_default_str();
    reproduce_cmd->add_option("--fidelity,-F", reproduce.fidelities, "Fidelity grid (default 0.50..0.95 step 0.05, 0.99)");
    reproduce_cmd->add_option("--delta", reproduce.delta, "Target failure probability")->capture_default_str();

    CrosscheckArgs crosscheck;
    auto *crosscheck_cmd = app.add_subcommand("crosscheck", "Compare closed forms, oracle, Monte Carlo and dense simulation");
    crosscheck_cmd->add_option("--max-n", crosscheck.max_n, "Largest ensemble")->capture_default_str();
    crosscheck_cmd->add_option("--fidelity,-F", crosscheck.fidelities, "Fidelity grid")->capture_default_str();
    crosscheck_cmd->add_option("--trials", crosscheck.trials, "Monte Carlo trials per case")->capture_default_str();
    crosscheck_cmd->add_option("--seed", crosscheck.seed, "64-bit seed")->capture_default_str();
    crosscheck_cmd->add_option("--workers", crosscheck.workers, "Monte Carlo threads")->capture_default_str();
    crosscheck_cmd->add_flag("--inject-fault", crosscheck.inject_fault)->group("");

    DumpArgs dump;
    auto *dump_cmd = app.add_subcommand("dump-state", "Write the density matrix after the ENG in binary form");
    dump_cmd->add_option("--noise", dump.noise, "pure, rank2 or werner")
        ->check(CLI::IsMember({"pure", "rank2", "werner"}))
        ->capture_default_str();
    dump_cmd->add_option("--fidelity,-F", dump.fidelity, "Fidelity")->capture_default_str();
    dump_cmd->add_option("--n", dump.n, "Ensemble size")->capture_default_str();
    dump_cmd->add_option("--d", dump.d, "Auxiliary dimension (default n + 1)");
    dump_cmd->add_option("--out", dump.out_file, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kDomainError;
    }

    try {
        if (*analytic_cmd) {
            cmd_analytic(analytic, out);
        } else if (*simulate_cmd) {
            cmd_simulate(simulate, out);
        } else if (*reproduce_cmd) {
            cmd_reproduce(reproduce, out);
        } else if (*crosscheck_cmd) {
            return cmd_crosscheck(crosscheck, out);
        } else if (*dump_cmd) {
            cmd_dump_state(dump, out);
        }
    } catch (const DomainError &e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    } catch (const ResourceError &e) {
        err << "resource limit: " << e.what() << "\n";
        return kResourceError;
    }
    return kOk;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    std::vector<const char *> argv;
    argv.push_back("enverify");
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace enverify::cli
