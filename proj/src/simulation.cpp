#include "mmfees/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_map>

namespace mmfees {

namespace {

// Inverse-CDF sampler cached per aggregate-book composition. A run touches
// only a handful of distinct books, so each CDF is built once and every draw
// afterwards costs one uniform plus a binary search.
class OrderFlowSampler {
public:
    OrderFlowSampler(const MarketParams& params, std::vector<double> weights)
        : params_(params), weights_(std::move(weights)), max_size_(params.max_order_size()) {}

    // `level_counts` holds, per level, how many agents quote there (<=255).
    int sample(const std::vector<int>& level_counts, std::span<const double> book, Rng& rng) {
        std::uint64_t key = 0;
        for (std::size_t k = 0; k < level_counts.size(); ++k)
            key |= static_cast<std::uint64_t>(level_counts[k]) << (8 * k);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            const double p = arrival_probability(book, weights_, params_.sigma);
            std::vector<double> cdf = binomial_pmf(max_size_, p);
            for (std::size_t m = 1; m < cdf.size(); ++m) cdf[m] += cdf[m - 1];
            cdf.back() = 1.0;
            it = cache_.emplace(key, std::move(cdf)).first;
        }
        const std::vector<double>& cdf = it->second;
        const double u = rng.uniform();
        return static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    }

private:
    const MarketParams& params_;
    std::vector<double> weights_;
    int max_size_;
    std::unordered_map<std::uint64_t, std::vector<double>> cache_;
};

// Per-period machinery shared by the learning and evaluation phases.
struct MarketEngine {
    const ExperimentConfig& cfg;
    JointActionCodec codec;
    StateCodec state_codec;
    std::vector<QuoteCurve> curves;      // curve per level, same both sides
    std::vector<double> weights;
    OrderFlowSampler sampler;
    Rng flow_rng;

    int n, k;
    std::vector<int> selected, executed;
    std::vector<int> ask_counts, bid_counts;
    std::vector<double> ask_quotes, bid_quotes;  // agents x levels
    AggregateBook book;
    std::vector<double> ask_fills, bid_fills;
    std::vector<double> rewards;

    MarketEngine(const ExperimentConfig& config, Rng flow_stream)
        : cfg(config),
          codec{config.market.grid.levels()},
          state_codec{config.market.grid.levels()},
          weights(level_weights(config.market.grid, config.fees, config.market.c0, config.market.c1)),
          sampler(config.market, weights),
          flow_rng(flow_stream),
          n(config.market.n_agents),
          k(config.market.grid.levels()) {
        for (int level = 1; level <= k; ++level) curves.push_back(make_quote_curve(level, config.market));
        selected.resize(n);
        executed.resize(n);
        ask_counts.resize(k);
        bid_counts.resize(k);
        ask_quotes.resize(static_cast<std::size_t>(n) * k);
        bid_quotes.resize(static_cast<std::size_t>(n) * k);
        book.ask.resize(k);
        book.bid.resize(k);
        ask_fills.resize(static_cast<std::size_t>(n) * k);
        bid_fills.resize(static_cast<std::size_t>(n) * k);
        rewards.resize(n);
    }

    // Quotes, order flow, matching, rewards and inventory for one period,
    // given `executed` actions. Returns the next state id.
    int step(std::vector<AgentState>& agents) {
        std::fill(ask_counts.begin(), ask_counts.end(), 0);
        std::fill(bid_counts.begin(), bid_counts.end(), 0);
        for (int i = 0; i < n; ++i) {
            const int ask_level = codec.ask_level(executed[i]);
            const int bid_level = codec.bid_level(executed[i]);
            ++ask_counts[ask_level - 1];
            ++bid_counts[bid_level - 1];
            const QuoteCurve& ac = curves[ask_level - 1];
            const QuoteCurve& bc = curves[bid_level - 1];
            for (int j = 0; j < k; ++j) {
                ask_quotes[static_cast<std::size_t>(i) * k + j] = ac[j];
                bid_quotes[static_cast<std::size_t>(i) * k + j] = bc[j];
            }
        }
        for (int j = 0; j < k; ++j) {
            double a = 0.0, b = 0.0;
            for (int level = 0; level < k; ++level) {
                a += ask_counts[level] * curves[level][j];
                b += bid_counts[level] * curves[level][j];
            }
            book.ask[j] = a;
            book.bid[j] = b;
        }

        const int m_ask = sampler.sample(ask_counts, book.ask, flow_rng);
        const int m_bid = sampler.sample(bid_counts, book.bid, flow_rng);
        match_side_into(ask_quotes, n, k, static_cast<double>(m_ask), ask_fills);
        match_side_into(bid_quotes, n, k, static_cast<double>(m_bid), bid_fills);

        for (int i = 0; i < n; ++i) {
            double ask_total = 0.0, bid_total = 0.0;
            for (int j = 0; j < k; ++j) {
                ask_total += ask_fills[static_cast<std::size_t>(i) * k + j];
                bid_total += bid_fills[static_cast<std::size_t>(i) * k + j];
            }
            const double dy = bid_total - ask_total;
            rewards[i] = period_reward({ask_fills.data() + static_cast<std::size_t>(i) * k, static_cast<std::size_t>(k)},
                                       {bid_fills.data() + static_cast<std::size_t>(i) * k, static_cast<std::size_t>(k)},
                                       cfg.market.grid, cfg.fees.beta, cfg.market.xi, dy);
            agents[i].inventory = inventory_update(agents[i].inventory, bid_total, ask_total);
        }
        return state_codec.encode(book);
    }
};

int initial_state(const StateCodec& codec) {
    return codec.n_states();  // widest bucket on both sides before any book exists
}

void run_eval(MarketEngine& engine, std::vector<AgentState>& agents, int state,
              std::int64_t periods, EvalStats& stats, std::vector<InventorySummary>* inv) {
    const int n = engine.n;
    const int k = engine.k;
    double fee_volume = 0.0;
    double fee_weighted = 0.0;
    std::vector<int> profile(n);
    for (std::int64_t t = 0; t < periods; ++t) {
        for (int i = 0; i < n; ++i) {
            engine.selected[i] = select_action(agents[i].q.row(state), 0.0, agents[i].rng);
            engine.executed[i] =
                apply_skew(engine.selected[i], agents[i].inventory, engine.cfg.agent, engine.codec);
        }
        state = engine.step(agents);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < k; ++j) {
                const double f = engine.ask_fills[static_cast<std::size_t>(i) * k + j] +
                                 engine.bid_fills[static_cast<std::size_t>(i) * k + j];
                fee_volume += f;
                fee_weighted += f * (engine.cfg.market.grid.deltas[j] + engine.cfg.fees.beta);
            }
            if (inv) {
                (*inv)[i].min = std::min((*inv)[i].min, agents[i].inventory);
                (*inv)[i].max = std::max((*inv)[i].max, agents[i].inventory);
                (*inv)[i].final_value = agents[i].inventory;
            }
        }
        profile.assign(engine.executed.begin(), engine.executed.end());
        std::sort(profile.begin(), profile.end());
        ++stats.profile_counts[profile];
    }
    if (fee_volume > 0.0) stats.net_fee = fee_weighted / fee_volume;
    stats.orders_per_agent = fee_volume / (static_cast<double>(periods) * n * 2.0);
}

}  // namespace

std::vector<int> EvalStats::modal_profile() const {
    std::vector<int> best;
    std::int64_t best_count = -1;
    for (const auto& [profile, count] : profile_counts) {
        if (count > best_count) {
            best = profile;
            best_count = count;
        }
    }
    return best;
}

EvalStats evaluate_greedy(std::vector<AgentState>& agents, const ExperimentConfig& cfg,
                          std::int64_t eval_periods) {
    MarketEngine engine(cfg, Rng::from_keys(static_cast<std::uint64_t>(cfg.base_seed),
                                            static_cast<std::uint64_t>(cfg.market.n_agents), 1));
    EvalStats stats;
    run_eval(engine, agents, initial_state(engine.state_codec), eval_periods, stats, nullptr);
    return stats;
}

InstanceResult run_instance(const ExperimentConfig& cfg, std::int64_t seed) {
    const int n = cfg.market.n_agents;
    const int n_states = cfg.market.grid.levels() * cfg.market.grid.levels();
    const int n_actions = n_states;

    std::vector<AgentState> agents(n);
    for (int i = 0; i < n; ++i) {
        agents[i].q = QTable(n_states, n_actions);
        agents[i].rng = Rng::from_keys(static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(i));
    }
    MarketEngine engine(cfg, Rng::from_keys(static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(n)));

    InstanceResult result;
    result.inventory.assign(n, InventorySummary{});

    // Greedy fingerprint per agent per state; only the visited row can move
    // each period, so the policy-change check is O(actions) per agent.
    std::vector<std::vector<int>> greedy(n, std::vector<int>(n_states));
    for (int i = 0; i < n; ++i)
        for (int s = 1; s <= n_states; ++s) greedy[i][s - 1] = greedy_action(agents[i].q.row(s));

    int state = initial_state(engine.state_codec);
    std::int64_t stable = 0;
    std::int64_t t = 0;
    for (; t < cfg.max_periods; ++t) {
        // One exploration draw per period: on an exploration period every
        // agent acts uniformly at random, otherwise everyone is greedy.
        const double eps = epsilon(static_cast<double>(t), cfg.agent.mu);
        const bool explore = eps > 0.0 && engine.flow_rng.uniform() < eps;
        for (int i = 0; i < n; ++i) {
            engine.selected[i] = explore
                                     ? agents[i].rng.uniform_int(engine.codec.n_actions()) + 1
                                     : select_action(agents[i].q.row(state), 0.0, agents[i].rng);
            engine.executed[i] =
                apply_skew(engine.selected[i], agents[i].inventory, cfg.agent, engine.codec);
        }
        const int next_state = engine.step(agents);

        bool policy_changed = false;
        for (int i = 0; i < n; ++i) {
            q_update(agents[i].q, state, engine.selected[i], engine.rewards[i], next_state,
                     cfg.agent.alpha, cfg.agent.gamma);
            const int new_greedy = greedy_action(agents[i].q.row(state));
            if (new_greedy != greedy[i][state - 1]) {
                greedy[i][state - 1] = new_greedy;
                policy_changed = true;
            }
            InventorySummary& inv = result.inventory[i];
            inv.min = std::min(inv.min, agents[i].inventory);
            inv.max = std::max(inv.max, agents[i].inventory);
            inv.final_value = agents[i].inventory;
        }
        state = next_state;

        stable = policy_changed ? 0 : stable + 1;
        if (stable >= cfg.convergence_window) {
            result.converged = true;
            ++t;
            break;
        }
    }
    result.periods_run = t;

    EvalStats stats;
    run_eval(engine, agents, state, cfg.eval_periods, stats, &result.inventory);
    result.net_fee = stats.net_fee;
    result.orders_per_agent = stats.orders_per_agent;
    result.modal_profile = stats.modal_profile();
    if (!stats.profile_counts.empty())
        result.modal_fraction = static_cast<double>(stats.profile_counts.at(result.modal_profile)) /
                                static_cast<double>(cfg.eval_periods);

    result.final_greedy = std::move(greedy);
    for (int i = 0; i < n; ++i) result.q_tables.push_back(std::move(agents[i].q));
    return result;
}

AggregateResult run_experiment(const ExperimentConfig& cfg, int threads) {
    AggregateResult agg;
    agg.n_instances = cfg.n_instances;
    agg.instances.resize(cfg.n_instances);

    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, cfg.n_instances));

    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int ix = next.fetch_add(1);
            if (ix >= cfg.n_instances) return;
            agg.instances[ix] = run_instance(cfg, cfg.base_seed + ix);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    // statistics over converged instances, in instance order
    std::vector<double> fees, orders;
    std::map<std::vector<int>, int> modal_counts;
    for (const InstanceResult& r : agg.instances) {
        if (!r.converged) continue;
        ++agg.n_converged;
        if (r.net_fee) fees.push_back(*r.net_fee);
        orders.push_back(r.orders_per_agent);
        ++modal_counts[r.modal_profile];
    }
    agg.convergence_rate =
        cfg.n_instances > 0 ? static_cast<double>(agg.n_converged) / cfg.n_instances : 0.0;

    auto mean_std = [](const std::vector<double>& xs, double& mean, double& sd) {
        if (xs.empty()) {
            mean = std::numeric_limits<double>::quiet_NaN();
            sd = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        double s = 0.0;
        for (double x : xs) s += x;
        mean = s / static_cast<double>(xs.size());
        if (xs.size() < 2) {
            sd = 0.0;
            return;
        }
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    };
    mean_std(fees, agg.net_fee_mean, agg.net_fee_std);
    mean_std(orders, agg.orders_mean, agg.orders_std);

    int best = -1;
    for (const auto& [profile, count] : modal_counts) {
        if (count > best) {
            best = count;
            agg.modal_profile = profile;
        }
    }
    if (agg.n_converged > 0 && best > 0)
        agg.modal_fraction = static_cast<double>(best) / static_cast<double>(agg.n_converged);
    return agg;
}

std::string format_profile(const std::vector<int>& profile) {
    std::string out;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(profile[i]);
    }
    return out.empty() ? "none" : out;
}

}  // namespace mmfees
