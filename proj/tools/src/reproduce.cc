#include "reproduce.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "enverify/analytic.h"
#include "enverify/errors.h"

namespace enverify::cli {

namespace {

CsvRow analytic_row(const StrategySpec &spec, double f, double delta, std::string method = "analytic") {
    auto use = nominal_resources(spec);
    CsvRow row;
    row.strategy = to_string(spec.kind);
    row.fidelity = f;
    row.n = spec.n;
    row.m = spec.m;
    row.m_embed = spec.m_embed;
    row.delta = delta;
    row.copies_consumed = use.copies_consumed;
    row.ebits_consumed = use.ebits_consumed;
    row.method = std::move(method);
    return row;
}

CsvRow required_row(const StrategySpec &family, double f, double delta) {
    auto report = copies_required(family, f, delta);
    CsvRow row = analytic_row(report.strategy, f, report.delta);
    row.copies_consumed = report.copies_consumed;
    row.ebits_consumed = report.ebits_consumed;
    return row;
}

// Smallest m with 2^-m <= delta: the large-ensemble subspace protocol.
CsvRow subspace_limit_row(StrategyKind kind, double f, double delta) {
    int m = 1;
    while (std::ldexp(1.0, -m) > delta) {
        m++;
    }
    CsvRow row;
    row.strategy = to_string(kind);
    row.fidelity = f;
    row.m = m;
    row.delta = std::ldexp(1.0, -m);
    row.copies_consumed = m;
    row.ebits_consumed = m;
    row.method = "asymptotic";
    return row;
}

void write_file(const std::filesystem::path &path, const std::vector<CsvRow> &rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DomainError("cannot write " + path.string());
    }
    write_csv(out, rows);
}

}  // namespace

std::vector<double> default_fidelity_grid() {
    std::vector<double> grid;
    for (int k = 50; k <= 95; k += 5) {
        grid.push_back(k / 100.0);
    }
    grid.push_back(0.99);
    return grid;
}

std::vector<CsvRow> copies_vs_fidelity(const std::vector<double> &grid, double delta) {
    std::vector<CsvRow> rows;
    for (double f : grid) {
        rows.push_back(required_row(StrategySpec::single_copy(1), f, delta));
        rows.push_back(required_row(StrategySpec::rank2_full(1), f, delta));
        rows.push_back(subspace_limit_row(StrategyKind::Rank2Subspace, f, delta));
    }
    return rows;
}

std::vector<CsvRow> failure_at_fixed_consumption(const std::vector<double> &grid, int consumed) {
    std::vector<CsvRow> rows;
    const int n = (1 << consumed) - 1;
    for (double f : grid) {
        auto single = StrategySpec::single_copy(consumed);
        rows.push_back(analytic_row(single, f, strategy_failure(single, f)));
        auto pure_aux = StrategySpec::werner_full(n);
        rows.push_back(analytic_row(pure_aux, f, strategy_failure(pure_aux, f)));
        rows.back().copies_consumed = consumed;
        auto embedded = StrategySpec::embed_eng(n, consumed);
        rows.push_back(analytic_row(embedded, f, strategy_failure(embedded, f)));
    }
    return rows;
}

std::vector<CsvRow> ratio_rows(const std::vector<double> &grid, double delta, bool werner) {
    std::vector<CsvRow> rows;
    for (double f : grid) {
        rows.push_back(required_row(StrategySpec::single_copy(1), f, delta));
        if (werner) {
            rows.push_back(required_row(StrategySpec::werner_full(1), f, delta));
            rows.push_back(subspace_limit_row(StrategyKind::WernerSubspace, f, delta));
        } else {
            rows.push_back(required_row(StrategySpec::rank2_full(1), f, delta));
            rows.push_back(subspace_limit_row(StrategyKind::Rank2Subspace, f, delta));
        }
    }
    return rows;
}

std::vector<CsvRow> embed_vs_global_rows(const std::vector<double> &fidelities, int max_consumed) {
    std::vector<CsvRow> rows;
    for (double f : fidelities) {
        for (int c = 1; c <= max_consumed; c++) {
            auto single = StrategySpec::single_copy(c);
            rows.push_back(analytic_row(single, f, strategy_failure(single, f)));
            auto direct = StrategySpec::direct_embed_measure(c);
            rows.push_back(analytic_row(direct, f, strategy_failure(direct, f)));
        }
    }
    return rows;
}

std::vector<CsvRow> aux_source_rows(const std::vector<double> &fidelities, int max_consumed) {
    std::vector<CsvRow> rows;
    for (double f : fidelities) {
        for (int c = 1; c <= max_consumed; c++) {
            const int n = (1 << c) - 1;
            auto pure_aux = StrategySpec::werner_full(n);
            rows.push_back(analytic_row(pure_aux, f, strategy_failure(pure_aux, f)));
            auto embedded = StrategySpec::embed_eng(n, c);
            rows.push_back(analytic_row(embedded, f, strategy_failure(embedded, f)));
        }
    }
    return rows;
}

std::vector<std::string> reproduce_figure(
    const std::string &figure, const std::string &dir, const std::vector<double> &grid, double delta) {
    std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    std::vector<std::pair<std::string, std::vector<CsvRow>>> files;
    if (figure == "2a") {
        files.push_back({"fig2a_copies.csv", copies_vs_fidelity(grid, delta)});
    } else if (figure == "2b") {
        files.push_back({"fig2b_failure.csv", failure_at_fixed_consumption(grid, 9)});
    } else if (figure == "app-c") {
        files.push_back({"appc_rank2_ratio.csv", ratio_rows(grid, delta, false)});
        files.push_back({"appc_werner_ratio.csv", ratio_rows(grid, delta, true)});
        files.push_back({"appc_embed_vs_global.csv", embed_vs_global_rows({0.7, 0.8, 0.9, 0.95}, 20)});
        files.push_back({"appc_aux_source.csv", aux_source_rows({0.7, 0.8, 0.9, 0.95}, 10)});
    } else {
        throw DomainError("unknown figure '" + figure + "' (expected 2a, 2b or app-c)");
    }
    std::vector<std::string> written;
    for (const auto &[name, rows] : files) {
        write_file(base / name, rows);
        written.push_back((base / name).string());
    }
    return written;
}

}  // namespace enverify::cli
