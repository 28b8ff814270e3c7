// Acceptance suite: one check line per criterion, nonzero exit on any failure.
// Runs the full 20-instance experiments, so expect a few minutes of wall time.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mmfees/game.hpp"
#include "mmfees/simulation.hpp"
#include "mmfees/sweep.hpp"

using namespace mmfees;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", x);
    return buf;
}

struct CellSpec {
    double gamma = 0.95;
    double beta = 0.0;
    double eta = 0.0;
    double sigma = 0.4;
    double xi = 0.05;
    int n_agents = 2;
};

class CellRunner {
public:
    const AggregateResult& run(const CellSpec& spec) {
        const std::string key = fmt(spec.gamma) + "|" + fmt(spec.beta) + "|" + fmt(spec.eta) + "|" +
                                fmt(spec.sigma) + "|" + fmt(spec.xi) + "|" + std::to_string(spec.n_agents);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;

        ExperimentConfig cfg;
        cfg.agent.gamma = spec.gamma;
        cfg.fees = FeeSchedule{spec.beta, spec.eta};
        cfg.market.sigma = spec.sigma;
        cfg.market.xi = spec.xi;
        cfg.market.n_agents = spec.n_agents;
        cfg.base_seed = 1;
        std::cerr << "running cell " << key << " ..." << std::flush;
        const AggregateResult agg = run_experiment(cfg, 0);
        std::cerr << " net " << agg.net_fee_mean << " orders " << agg.orders_mean << " modal "
                  << format_profile(agg.modal_profile) << " (" << agg.modal_fraction << ")\n";
        return cache_.emplace(key, agg).first->second;
    }

    const std::map<std::string, AggregateResult>& cells() const { return cache_; }

private:
    std::map<std::string, AggregateResult> cache_;
};

bool in_band(double x, double lo, double hi) { return x >= lo && x <= hi; }

bool has_profile(const std::vector<std::vector<int>>& set, const std::vector<int>& profile) {
    return std::find(set.begin(), set.end(), profile) != set.end();
}

Fills match_lot_oracle(const std::vector<double>& quotes, int agents, int levels, int m) {
    Fills fills(agents, levels);
    std::vector<double> remaining(levels, 0.0);
    for (int k = 0; k < levels; ++k)
        for (int i = 0; i < agents; ++i) remaining[k] += quotes[static_cast<std::size_t>(i) * levels + k];
    for (int lot = 0; lot < m; ++lot) {
        int k = 0;
        while (k < levels && remaining[k] <= 1e-12) ++k;
        if (k == levels) break;
        const double take = std::min(1.0, remaining[k]);
        double level_total = 0.0;
        for (int i = 0; i < agents; ++i) level_total += quotes[static_cast<std::size_t>(i) * levels + k];
        for (int i = 0; i < agents; ++i)
            fills.at(i, k) += take * quotes[static_cast<std::size_t>(i) * levels + k] / level_total;
        remaining[k] -= take;
    }
    return fills;
}

// ---- criteria ----

void criterion_1_matrix_anchors() {
    const MarketParams params;
    const RewardMatrix m0 = build_reward_matrix(params, FeeSchedule{0.0, 0.0});
    report(1, "matrix anchor (6,6) = 34.2 +/- 0.05 at beta=0",
           std::abs(m0.at2(6, 6) - 34.2) <= 0.05, "got " + fmt(m0.at2(6, 6)));
    report(1, "matrix anchor (1,1) = 26.5 +/- 0.05 at beta=0",
           std::abs(m0.at2(1, 1) - 26.5) <= 0.05, "got " + fmt(m0.at2(1, 1)));

    const RewardMatrix m1 = build_reward_matrix(params, FeeSchedule{0.1, 0.15});
    report(1, "matrix anchor (own 1 vs opp 6) = 32.0 +/- 0.05 at beta=0.1",
           std::abs(m1.at2(1, 6) - 32.0) <= 0.05, "got " + fmt(m1.at2(1, 6)));

    const RewardMatrix m2 = build_reward_matrix(params, FeeSchedule{0.2, 0.25});
    report(1, "matrix anchor (own 1 vs opp 6) = 34.4 +/- 0.05 at beta=0.2",
           std::abs(m2.at2(1, 6) - 34.4) <= 0.05, "got " + fmt(m2.at2(1, 6)));
}

void criterion_2_classification() {
    const MarketParams params;
    const RewardMatrix m0 = build_reward_matrix(params, FeeSchedule{0.0, 0.0});
    const auto nash0 = find_pure_nash(m0);
    const auto coop0 = find_cooperative(m0);
    report(2, "beta=0: (6,6) is pure Nash and cooperative, (1,1) is not Nash",
           has_profile(nash0, {6, 6}) && has_profile(coop0, {6, 6}) && !has_profile(nash0, {1, 1}),
           "nash has (6,6): " + std::to_string(has_profile(nash0, {6, 6})) +
               ", coop has (6,6): " + std::to_string(has_profile(coop0, {6, 6})) +
               ", nash has (1,1): " + std::to_string(has_profile(nash0, {1, 1})));

    const RewardMatrix m1 = build_reward_matrix(params, FeeSchedule{0.1, 0.15});
    const auto nash1 = find_pure_nash(m1);
    const auto coop1 = find_cooperative(m1);
    report(2, "beta=0.1: (6,6) cooperative but no longer Nash",
           !has_profile(nash1, {6, 6}) && has_profile(coop1, {6, 6}),
           "nash has (6,6): " + std::to_string(has_profile(nash1, {6, 6})) +
               ", coop has (6,6): " + std::to_string(has_profile(coop1, {6, 6})));
}

void criterion_3_table1(CellRunner& cells) {
    const AggregateResult& b0 = cells.run({.gamma = 0.95, .beta = 0.0, .eta = 0.0});
    report(3, "gamma=0.95 beta=0: net fee in [1.75, 2.00]",
           in_band(b0.net_fee_mean, 1.75, 2.00) && b0.convergence_rate == 1.0,
           "net " + fmt(b0.net_fee_mean) + ", convergence " + fmt(b0.convergence_rate));
    report(3, "gamma=0.95 beta=0: orders in [7.5, 10.5]", in_band(b0.orders_mean, 7.5, 10.5),
           "orders " + fmt(b0.orders_mean));

    const AggregateResult& b2 = cells.run({.gamma = 0.95, .beta = 0.2, .eta = 0.25});
    report(3, "gamma=0.95 beta=0.2: net fee in [1.10, 1.35]",
           in_band(b2.net_fee_mean, 1.10, 1.35) && b2.convergence_rate == 1.0,
           "net " + fmt(b2.net_fee_mean));

    const AggregateResult& g99 = cells.run({.gamma = 0.99, .beta = 0.2, .eta = 0.25});
    report(3, "gamma=0.99 beta=0.2: net fee in [1.90, 2.15]",
           in_band(g99.net_fee_mean, 1.90, 2.15) && g99.convergence_rate == 1.0,
           "net " + fmt(g99.net_fee_mean));
}

void criterion_4_nonmonotonicity(CellRunner& cells) {
    const AggregateResult& b2 = cells.run({.gamma = 0.95, .beta = 0.2, .eta = 0.25});
    const AggregateResult& b3 = cells.run({.gamma = 0.95, .beta = 0.3, .eta = 0.35});
    report(4, "gamma=0.95: net fee rises from beta=0.2 to beta=0.3",
           b3.net_fee_mean > b2.net_fee_mean,
           fmt(b3.net_fee_mean) + " vs " + fmt(b2.net_fee_mean));

    const AggregateResult& g0 = cells.run({.gamma = 0.99, .beta = 0.0, .eta = 0.0});
    const AggregateResult& g2 = cells.run({.gamma = 0.99, .beta = 0.2, .eta = 0.25});
    report(4, "gamma=0.99: net fee at beta=0.2 exceeds beta=0",
           g2.net_fee_mean > g0.net_fee_mean, fmt(g2.net_fee_mean) + " vs " + fmt(g0.net_fee_mean));
}

void criterion_5_taker_maker(CellRunner& cells) {
    const AggregateResult& r15 = cells.run({.beta = -0.15, .eta = -0.10});
    const AggregateResult& r45 = cells.run({.beta = -0.45, .eta = -0.40});
    const AggregateResult& r75 = cells.run({.beta = -0.75, .eta = -0.70});
    report(5, "orders increase along beta -0.15 -> -0.45 -> -0.75",
           r15.orders_mean < r45.orders_mean && r45.orders_mean < r75.orders_mean,
           fmt(r15.orders_mean) + " < " + fmt(r45.orders_mean) + " < " + fmt(r75.orders_mean));
    report(5, "beta=-0.75: orders in [14.5, 16.5]", in_band(r75.orders_mean, 14.5, 16.5),
           "orders " + fmt(r75.orders_mean));
    const double spread = r75.net_fee_mean - (-0.75);
    report(5, "beta=-0.75: implied executed spread in [1.9, 2.1]", in_band(spread, 1.9, 2.1),
           "spread " + fmt(spread));
}

void criterion_6_volatility(CellRunner& cells) {
    const AggregateResult& low = cells.run({.beta = 0.2, .eta = 0.25, .sigma = 0.2});
    report(6, "sigma=0.2 beta=0.2: net fee = 1.200 with std < 0.01",
           std::abs(low.net_fee_mean - 1.200) < 0.01 && low.net_fee_std < 0.01,
           "net " + fmt(low.net_fee_mean) + " std " + fmt(low.net_fee_std));
}

void criterion_7_agents(CellRunner& cells) {
    const AggregateResult& n8 = cells.run({.n_agents = 8});
    report(7, "N=8: net fee in [0.98, 1.10]", in_band(n8.net_fee_mean, 0.98, 1.10),
           "net " + fmt(n8.net_fee_mean));
    report(7, "N=8: orders in [12.5, 14.0]", in_band(n8.orders_mean, 12.5, 14.0),
           "orders " + fmt(n8.orders_mean));
    const AggregateResult& n4 = cells.run({.n_agents = 4});
    report(7, "N=4: net fee in [1.75, 2.00]", in_band(n4.net_fee_mean, 1.75, 2.00),
           "net " + fmt(n4.net_fee_mean));
}

void criterion_8_convergence_share(CellRunner& cells) {
    const AggregateResult& b1 = cells.run({.gamma = 0.95, .beta = 0.1, .eta = 0.15});
    int count = 0;
    for (const InstanceResult& r : b1.instances)
        if (r.converged && r.modal_profile == std::vector<int>{6, 6}) ++count;
    const double fraction = static_cast<double>(count) / b1.n_instances;
    report(8, "beta=0.1: fraction of instances settling on (6,6) in [0.55, 0.95]",
           in_band(fraction, 0.55, 0.95), "fraction " + fmt(fraction));
}

void criterion_9_properties(CellRunner& cells) {
    // match_side vs one-lot oracle, 1000 random small integer books
    {
        Rng rng = Rng::from_keys(1234, 0);
        bool ok = true;
        for (int trial = 0; trial < 1000 && ok; ++trial) {
            std::vector<double> quotes(8);
            for (double& q : quotes) q = static_cast<double>(rng.uniform_int(8));
            const int m = rng.uniform_int(41);
            const Fills fast = match_side(quotes, 2, 4, m);
            const Fills slow = match_lot_oracle(quotes, 2, 4, m);
            for (std::size_t i = 0; i < quotes.size(); ++i)
                if (std::abs(fast.data[i] - slow.data[i]) > 1e-9) ok = false;
        }
        report(9, "matching equals the tick-lot brute-force oracle on 1000 books", ok, "exact");
    }

    // exact expected reward vs 10^6-sample Monte Carlo, 10 random profiles
    {
        const MarketParams params;
        const FeeSchedule fees{0.0, 0.0};
        const JointActionCodec codec{4};
        const auto weights = level_weights(params.grid, fees, params.c0, params.c1);
        Rng prof_rng = Rng::from_keys(55, 0);
        Rng mc_rng = Rng::from_keys(55, 1);
        bool ok = true;
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const std::vector<int> profile{prof_rng.uniform_int(16) + 1, prof_rng.uniform_int(16) + 1};
            const std::vector<double> exact = expected_reward(profile, params, fees);

            std::vector<double> ask_q(8), bid_q(8), ask_book(4, 0.0), bid_book(4, 0.0);
            for (int i = 0; i < 2; ++i) {
                const QuoteCurve a = make_quote_curve(codec.ask_level(profile[i]), params);
                const QuoteCurve b = make_quote_curve(codec.bid_level(profile[i]), params);
                for (int j = 0; j < 4; ++j) {
                    ask_q[static_cast<std::size_t>(i) * 4 + j] = a[j];
                    bid_q[static_cast<std::size_t>(i) * 4 + j] = b[j];
                    ask_book[j] += a[j];
                    bid_book[j] += b[j];
                }
            }
            const double pa = arrival_probability(ask_book, weights, params.sigma);
            const double pb = arrival_probability(bid_book, weights, params.sigma);
            const int n_samples = 1'000'000;
            double sum = 0.0, sumsq = 0.0;
            std::vector<double> fa(8), fb(8);
            for (int s = 0; s < n_samples; ++s) {
                match_side_into(ask_q, 2, 4, sample_order_size(pa, 40, mc_rng), fa);
                match_side_into(bid_q, 2, 4, sample_order_size(pb, 40, mc_rng), fb);
                double at = 0.0, bt = 0.0;
                for (int j = 0; j < 4; ++j) {
                    at += fa[j];
                    bt += fb[j];
                }
                const double r = period_reward({fa.data(), 4}, {fb.data(), 4}, params.grid, fees.beta,
                                               params.xi, bt - at);
                sum += r;
                sumsq += r * r;
            }
            const double mean = sum / n_samples;
            const double se = std::sqrt(std::max(sumsq / n_samples - mean * mean, 0.0) / (n_samples - 1.0));
            const double sigmas = std::abs(exact[0] - mean) / std::max(se, 1e-12);
            worst = std::max(worst, sigmas);
            if (sigmas > 3.0) ok = false;
        }
        report(9, "exact expected reward within 3 standard errors of 10^6-sample Monte Carlo", ok,
               "worst " + fmt(worst) + " se");
    }

    // determinism: identical config/seed -> identical CSV, any thread count
    {
        ExperimentConfig cfg;
        cfg.n_instances = 2;
        cfg.convergence_window = 20'000;
        cfg.agent.mu = 1e-4;
        cfg.base_seed = 777;
        const auto rows1 = run_sweep("3", cfg, 1);
        const auto rows2 = run_sweep("3", cfg, 2);
        std::ostringstream a, b;
        write_csv(a, rows1);
        write_csv(b, rows2);
        report(9, "same seed gives bit-identical CSV independent of parallelism", a.str() == b.str(),
               a.str() == b.str() ? "identical" : "diverged");
    }

    // inventory containment across every instance run so far
    {
        bool ok = true;
        double worst = 0.0;
        const double bound = 500.0 + 2.0 * 20.0;
        for (const auto& [key, agg] : cells.cells()) {
            for (const InstanceResult& r : agg.instances)
                for (const InventorySummary& inv : r.inventory) {
                    worst = std::max({worst, std::abs(inv.min), std::abs(inv.max)});
                    if (inv.min <= -bound || inv.max >= bound) ok = false;
                }
        }
        report(9, "inventory stays within the skew containment bound", ok,
               "max |y| " + fmt(worst) + " < " + fmt(bound));
    }

    // epsilon decay and Q-update algebraic identities
    {
        bool ok = epsilon(0.0, 1e-5) == 1.0;
        ok = ok && std::abs(epsilon(1e5, 1e-5) - std::exp(-1.0)) < 1e-12;
        for (double t = 0.0; t < 1e6 && ok; t += 5e4) ok = epsilon(t + 5e4, 1e-5) < epsilon(t, 1e-5);

        QTable q(16, 16);
        q.at(2, 3) = 7.5;
        const std::vector<double> before = q.values;
        q_update(q, 2, 3, 99.0, 4, 0.0, 0.95);
        ok = ok && q.values == before;
        q_update(q, 2, 3, 42.0, 4, 1.0, 0.0);
        ok = ok && q.at(2, 3) == 42.0;
        report(9, "epsilon decay and Q-update identities", ok, "alpha=0 and alpha=1/gamma=0 cases");
    }
}

}  // namespace

int main() {
    CellRunner cells;
    criterion_1_matrix_anchors();
    criterion_2_classification();
    criterion_3_table1(cells);
    criterion_4_nonmonotonicity(cells);
    criterion_5_taker_maker(cells);
    criterion_6_volatility(cells);
    criterion_7_agents(cells);
    criterion_8_convergence_share(cells);
    criterion_9_properties(cells);

    std::printf("%s: %d check(s) failed\n", g_failures == 0 ? "ALL PASS" : "RESULT", g_failures);
    return g_failures == 0 ? 0 : 1;
}
