#ifndef ENVERIFY_TOOLS_REPRODUCE_H
#define ENVERIFY_TOOLS_REPRODUCE_H

#include <string>
#include <vector>

#include "output.h"

namespace enverify::cli {

/// F = 0.50, 0.55, .., 0.95, 0.99.
std::vector<double> default_fidelity_grid();

/// Copies consumed at failure target `delta` for rank-2 ensembles: the
/// single-copy baseline, the full-readout collective protocol and the
/// subspace protocol on an unbounded ensemble.
std::vector<CsvRow> copies_vs_fidelity(const std::vector<double> &grid, double delta);

/// Failure probability of Werner ensembles when `consumed` copies are
/// measured: single-copy baseline, pure-auxiliary ENG (n = 2^consumed - 1)
/// and embedded-auxiliary ENG.
std::vector<CsvRow> failure_at_fixed_consumption(const std::vector<double> &grid, int consumed);

/// Copies consumed by the single-copy baseline and the collective
/// protocols on rank-2 or Werner ensembles (ratio curves).
std::vector<CsvRow> ratio_rows(const std::vector<double> &grid, double delta, bool werner);

/// Failure probability against copies consumed: optimal single-copy
/// strategy versus direct measurement of the embedded register (no ENG).
std::vector<CsvRow> embed_vs_global_rows(const std::vector<double> &fidelities, int max_consumed);

/// Werner failure probability against copies consumed, pure versus
/// embedded auxiliary register.
std::vector<CsvRow> aux_source_rows(const std::vector<double> &fidelities, int max_consumed);

/// Writes the CSV files for `figure` (2a, 2b, app-c) under `dir` and
/// returns their paths.
std::vector<std::string> reproduce_figure(
    const std::string &figure, const std::string &dir, const std::vector<double> &grid, double delta);

}  // namespace enverify::cli

#endif
