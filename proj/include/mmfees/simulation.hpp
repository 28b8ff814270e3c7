#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmfees/agent.hpp"
#include "mmfees/market.hpp"

namespace mmfees {

struct ExperimentConfig {
    MarketParams market;
    FeeSchedule fees;
    AgentConfig agent;
    int n_instances = 20;
    std::int64_t convergence_window = 100'000;
    std::int64_t max_periods = 20'000'000;
    std::int64_t eval_periods = 1'000;
    std::int64_t base_seed = 1;
};

struct InventorySummary {
    double min = 0.0;
    double max = 0.0;
    double final_value = 0.0;
};

struct EvalStats {
    std::optional<double> net_fee;                   // executed-volume-weighted delta + beta
    double orders_per_agent = 0.0;                   // filled shares / (periods * agents * 2)
    std::map<std::vector<int>, std::int64_t> profile_counts;  // sorted executed profiles

    std::vector<int> modal_profile() const;
};

struct InstanceResult {
    bool converged = false;
    std::int64_t periods_run = 0;
    std::vector<std::vector<int>> final_greedy;      // [agent][state] -> action id
    std::optional<double> net_fee;
    double orders_per_agent = 0.0;
    std::vector<InventorySummary> inventory;
    std::vector<int> modal_profile;
    double modal_fraction = 0.0;
    std::vector<QTable> q_tables;
};

struct AggregateResult {
    int n_instances = 0;
    int n_converged = 0;
    double net_fee_mean = 0.0;
    double net_fee_std = 0.0;
    double orders_mean = 0.0;
    double orders_std = 0.0;
    double convergence_rate = 0.0;
    std::vector<int> modal_profile;   // most common modal profile across converged instances
    double modal_fraction = 0.0;
    std::vector<InstanceResult> instances;
};

// One learning run to convergence (greedy policies of all agents unchanged
// for `convergence_window` consecutive periods) followed by a frozen-policy
// evaluation window. Deterministic given (cfg, seed).
InstanceResult run_instance(const ExperimentConfig& cfg, std::int64_t seed);

// Frozen-greedy evaluation from the default initial state; exposed for tests
// and tools. Agents' Q-tables are read-only; their RNG streams advance.
EvalStats evaluate_greedy(std::vector<AgentState>& agents, const ExperimentConfig& cfg,
                          std::int64_t eval_periods);

// n_instances runs with seeds base_seed + 0 .. n-1, executed on `threads`
// workers (0 = hardware concurrency). Aggregation is a deterministic fold in
// instance order, so results do not depend on the parallelism degree.
AggregateResult run_experiment(const ExperimentConfig& cfg, int threads = 0);

std::string format_profile(const std::vector<int>& profile);

}  // namespace mmfees
