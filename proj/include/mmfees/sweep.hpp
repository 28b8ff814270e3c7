#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mmfees/simulation.hpp"

namespace mmfees {

struct SweepRow {
    std::string table_id;
    ExperimentConfig cfg;
    AggregateResult result;
};

// Parameter grids of the five report tables. `table` accepts "1".."5" or
// the names maker-taker, taker-maker, volatility, inventory, agents.
// Rows run sequentially; instances within a row run on `threads` workers.
std::vector<SweepRow> run_sweep(const std::string& table, const ExperimentConfig& base, int threads,
                                std::ostream* progress = nullptr);

// Fixed column set, reals in 6-decimal fixed format.
void write_csv(std::ostream& os, std::span<const SweepRow> rows);

std::string csv_header();
std::string csv_row(const SweepRow& row);

}  // namespace mmfees
