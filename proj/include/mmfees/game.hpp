#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmfees/agent.hpp"
#include "mmfees/market.hpp"

namespace mmfees {

enum class Side { ask, bid };

// Exact one-period expected rewards, one value per agent per joint-action
// profile. Profiles are tuples of 1-based action ids; the flat index runs
// over agent 0's action slowest.
struct RewardMatrix {
    int n_agents = 0;
    int n_actions = 0;
    std::vector<double> values;  // profile-major, then agent

    std::size_t profile_index(std::span<const int> profile) const;
    double at(std::span<const int> profile, int agent) const;
    // Two-agent convenience accessor.
    double at2(int own, int competitor, int agent = 0) const;
    std::size_t n_profiles() const;
};

struct EquilibriumReport {
    std::vector<std::vector<int>> pure_nash;
    std::vector<std::vector<int>> cooperative;
    std::vector<double> pure_nash_joint_profit;
    std::vector<double> cooperative_joint_profit;
};

// E[fills] on one side under a profile, by exact enumeration of the binomial
// order flow; no sampling.
Fills expected_side_fills(std::span<const int> profile, Side side, const MarketParams& params,
                          const FeeSchedule& fees);

// Exact expected one-period reward per agent, rebates and inventory penalty
// included. Second moments come from the per-side fill distributions; the
// two sides are independent.
std::vector<double> expected_reward(std::span<const int> profile, const MarketParams& params,
                                    const FeeSchedule& fees);

// Full tensor over all K^(2N) profiles. Throws std::invalid_argument when the
// profile count exceeds 10^7. Symmetric agents are exploited: each distinct
// action multiset is enumerated once.
RewardMatrix build_reward_matrix(const MarketParams& params, const FeeSchedule& fees);

// Definition: no agent gains from a unilateral deviation (weak inequality).
std::vector<std::vector<int>> find_pure_nash(const RewardMatrix& matrix);

// Argmax of the summed rewards; all ties returned.
std::vector<std::vector<int>> find_cooperative(const RewardMatrix& matrix);

EquilibriumReport classify_equilibria(const RewardMatrix& matrix);

}  // namespace mmfees
