#include "mmfees/game.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mmfees {

namespace {

constexpr std::size_t kMaxProfiles = 10'000'000;

std::vector<double> side_quotes(std::span<const int> profile, Side side, const MarketParams& params,
                                const JointActionCodec& codec) {
    const int n = static_cast<int>(profile.size());
    const int k = params.grid.levels();
    std::vector<double> quotes(static_cast<std::size_t>(n) * k, 0.0);
    for (int i = 0; i < n; ++i) {
        const int level =
            side == Side::ask ? codec.ask_level(profile[i]) : codec.bid_level(profile[i]);
        const QuoteCurve curve = make_quote_curve(level, params);
        for (int j = 0; j < k; ++j) quotes[static_cast<std::size_t>(i) * k + j] = curve[j];
    }
    return quotes;
}

struct SideMoments {
    std::vector<double> revenue;      // E[sum fills * (delta + beta)] per agent
    std::vector<double> fill_mean;    // E[total fills] per agent
    std::vector<double> fill_square;  // E[total fills^2] per agent
};

SideMoments side_moments(std::span<const double> quotes, int agents, int levels,
                         const MarketParams& params, const FeeSchedule& fees,
                         std::span<const double> weights) {
    std::vector<double> agg(levels, 0.0);
    for (int i = 0; i < agents; ++i)
        for (int k = 0; k < levels; ++k) agg[k] += quotes[static_cast<std::size_t>(i) * levels + k];

    const int max_size = params.max_order_size();
    const double p = arrival_probability(agg, weights, params.sigma);
    const std::vector<double> pmf = binomial_pmf(max_size, p);

    SideMoments out;
    out.revenue.assign(agents, 0.0);
    out.fill_mean.assign(agents, 0.0);
    out.fill_square.assign(agents, 0.0);

    std::vector<double> fills(static_cast<std::size_t>(agents) * levels);
    for (int m = 0; m <= max_size; ++m) {
        const double w = pmf[m];
        if (w == 0.0) continue;
        match_side_into(quotes, agents, levels, static_cast<double>(m), fills);
        for (int i = 0; i < agents; ++i) {
            double rev = 0.0;
            double tot = 0.0;
            for (int k = 0; k < levels; ++k) {
                const double f = fills[static_cast<std::size_t>(i) * levels + k];
                rev += f * (params.grid.deltas[k] + fees.beta);
                tot += f;
            }
            out.revenue[i] += w * rev;
            out.fill_mean[i] += w * tot;
            out.fill_square[i] += w * tot * tot;
        }
    }
    return out;
}

}  // namespace

std::size_t RewardMatrix::n_profiles() const {
    std::size_t n = 1;
    for (int i = 0; i < n_agents; ++i) n *= static_cast<std::size_t>(n_actions);
    return n;
}

std::size_t RewardMatrix::profile_index(std::span<const int> profile) const {
    std::size_t ix = 0;
    for (int i = 0; i < n_agents; ++i) ix = ix * n_actions + static_cast<std::size_t>(profile[i] - 1);
    return ix;
}

double RewardMatrix::at(std::span<const int> profile, int agent) const {
    return values[profile_index(profile) * n_agents + agent];
}

double RewardMatrix::at2(int own, int competitor, int agent) const {
    const int profile[2] = {own, competitor};
    return at(profile, agent);
}

Fills expected_side_fills(std::span<const int> profile, Side side, const MarketParams& params,
                          const FeeSchedule& fees) {
    const JointActionCodec codec{params.grid.levels()};
    const int n = static_cast<int>(profile.size());
    const int k = params.grid.levels();
    const std::vector<double> quotes = side_quotes(profile, side, params, codec);
    const std::vector<double> weights = level_weights(params.grid, fees, params.c0, params.c1);

    std::vector<double> agg(k, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) agg[j] += quotes[static_cast<std::size_t>(i) * k + j];
    const int max_size = params.max_order_size();
    const double p = arrival_probability(agg, weights, params.sigma);
    const std::vector<double> pmf = binomial_pmf(max_size, p);

    Fills expected(n, k);
    std::vector<double> fills(static_cast<std::size_t>(n) * k);
    for (int m = 0; m <= max_size; ++m) {
        if (pmf[m] == 0.0) continue;
        match_side_into(quotes, n, k, static_cast<double>(m), fills);
        for (std::size_t ix = 0; ix < fills.size(); ++ix) expected.data[ix] += pmf[m] * fills[ix];
    }
    return expected;
}

std::vector<double> expected_reward(std::span<const int> profile, const MarketParams& params,
                                    const FeeSchedule& fees) {
    const JointActionCodec codec{params.grid.levels()};
    const int n = static_cast<int>(profile.size());
    const int k = params.grid.levels();
    const std::vector<double> weights = level_weights(params.grid, fees, params.c0, params.c1);

    const std::vector<double> ask_quotes = side_quotes(profile, Side::ask, params, codec);
    const std::vector<double> bid_quotes = side_quotes(profile, Side::bid, params, codec);
    const SideMoments ask = side_moments(ask_quotes, n, k, params, fees, weights);
    const SideMoments bid = side_moments(bid_quotes, n, k, params, fees, weights);

    std::vector<double> reward(n);
    for (int i = 0; i < n; ++i) {
        // E[(b - a)^2] = E[b^2] - 2 E[a] E[b] + E[a^2], sides independent
        const double dy2 =
            bid.fill_square[i] - 2.0 * ask.fill_mean[i] * bid.fill_mean[i] + ask.fill_square[i];
        reward[i] = ask.revenue[i] + bid.revenue[i] - params.xi * dy2;
    }
    return reward;
}

RewardMatrix build_reward_matrix(const MarketParams& params, const FeeSchedule& fees) {
    const int n = params.n_agents;
    const int n_actions = params.grid.levels() * params.grid.levels();

    double profile_count = 1.0;
    for (int i = 0; i < n; ++i) profile_count *= n_actions;
    if (profile_count > static_cast<double>(kMaxProfiles))
        throw std::invalid_argument("profile space too large for exact enumeration; simulate instead");

    RewardMatrix matrix;
    matrix.n_agents = n;
    matrix.n_actions = n_actions;
    matrix.values.assign(static_cast<std::size_t>(profile_count) * n, 0.0);

    // Agents are interchangeable, so the reward depends only on own action
    // and the multiset of all actions: enumerate sorted profiles once and
    // fan the per-slot values out to every ordering.
    std::map<std::vector<int>, std::vector<double>> by_multiset;

    std::vector<int> profile(n, 1);
    std::vector<int> sorted(n);
    for (std::size_t ix = 0;; ++ix) {
        sorted.assign(profile.begin(), profile.end());
        std::sort(sorted.begin(), sorted.end());
        auto it = by_multiset.find(sorted);
        if (it == by_multiset.end())
            it = by_multiset.emplace(sorted, expected_reward(sorted, params, fees)).first;
        const std::vector<double>& slot_reward = it->second;
        for (int i = 0; i < n; ++i) {
            // first slot in the sorted profile holding this action
            const auto pos = std::lower_bound(sorted.begin(), sorted.end(), profile[i]) - sorted.begin();
            matrix.values[ix * n + i] = slot_reward[pos];
        }
        int d = n - 1;
        while (d >= 0 && profile[d] == n_actions) {
            profile[d] = 1;
            --d;
        }
        if (d < 0) break;
        ++profile[d];
    }
    return matrix;
}

std::vector<std::vector<int>> find_pure_nash(const RewardMatrix& matrix) {
    const int n = matrix.n_agents;
    const int a = matrix.n_actions;
    std::vector<std::vector<int>> result;
    std::vector<int> profile(n, 1);
    std::vector<int> deviated(n);
    for (;;) {
        bool is_nash = true;
        for (int i = 0; i < n && is_nash; ++i) {
            const double own = matrix.at(profile, i);
            deviated.assign(profile.begin(), profile.end());
            for (int c = 1; c <= a; ++c) {
                if (c == profile[i]) continue;
                deviated[i] = c;
                if (matrix.at(deviated, i) > own) {
                    is_nash = false;
                    break;
                }
            }
        }
        if (is_nash) result.push_back(profile);
        int d = n - 1;
        while (d >= 0 && profile[d] == a) {
            profile[d] = 1;
            --d;
        }
        if (d < 0) break;
        ++profile[d];
    }
    return result;
}

std::vector<std::vector<int>> find_cooperative(const RewardMatrix& matrix) {
    const int n = matrix.n_agents;
    const int a = matrix.n_actions;
    std::vector<std::vector<int>> result;
    double best = 0.0;
    std::vector<int> profile(n, 1);
    for (;;) {
        double joint = 0.0;
        for (int i = 0; i < n; ++i) joint += matrix.at(profile, i);
        if (result.empty() || joint > best) {
            best = joint;
            result.clear();
            result.push_back(profile);
        } else if (joint == best) {
            result.push_back(profile);
        }
        int d = n - 1;
        while (d >= 0 && profile[d] == a) {
            profile[d] = 1;
            --d;
        }
        if (d < 0) break;
        ++profile[d];
    }
    return result;
}

EquilibriumReport classify_equilibria(const RewardMatrix& matrix) {
    EquilibriumReport report;
    report.pure_nash = find_pure_nash(matrix);
    report.cooperative = find_cooperative(matrix);
    auto joint = [&](const std::vector<int>& profile) {
        double s = 0.0;
        for (int i = 0; i < matrix.n_agents; ++i) s += matrix.at(profile, i);
        return s;
    };
    for (const auto& p : report.pure_nash) report.pure_nash_joint_profit.push_back(joint(p));
    for (const auto& p : report.cooperative) report.cooperative_joint_profit.push_back(joint(p));
    return report;
}

}  // namespace mmfees
