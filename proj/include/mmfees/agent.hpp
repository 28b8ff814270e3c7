#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "mmfees/market.hpp"
#include "mmfees/rng.hpp"

namespace mmfees {

// Joint (ask, bid) actions, ids 1..K^2 in row-major order:
// id = (ask_level - 1) * K + bid_level.
struct JointActionCodec {
    int levels = 4;

    int n_actions() const { return levels * levels; }
    int encode(int ask_level, int bid_level) const { return (ask_level - 1) * levels + bid_level; }
    int ask_level(int action) const { return (action - 1) / levels + 1; }
    int bid_level(int action) const { return (action - 1) % levels + 1; }
};

// Book state: per side, the volume-weighted mean level of last period's
// aggregate book, truncated and clamped to [1, K]. Truncation keeps a one-
// level undercut of the book distinguishable from the book itself. Empty
// side maps to the widest bucket. id = (ask_bucket - 1) * K + bid_bucket.
struct StateCodec {
    int levels = 4;

    int n_states() const { return levels * levels; }
    int bucket(std::span<const double> side) const;
    int encode(const AggregateBook& book) const {
        return (bucket(book.ask) - 1) * levels + bucket(book.bid);
    }
};

struct AgentConfig {
    double alpha = 0.05;        // learning rate
    double gamma = 0.95;        // discount factor
    double mu = 1e-5;           // exploration decay rate
    double skew_upper = 500.0;  // inventory above this -> sell-heavy quotes
    double skew_lower = -500.0; // inventory below this -> buy-heavy quotes
};

struct QTable {
    int states = 0;
    int actions = 0;
    std::vector<double> values;

    QTable() = default;
    QTable(int s, int a) : states(s), actions(a), values(static_cast<std::size_t>(s) * a, 0.0) {}

    std::span<double> row(int state) {
        return {values.data() + static_cast<std::size_t>(state - 1) * actions, static_cast<std::size_t>(actions)};
    }
    std::span<const double> row(int state) const {
        return {values.data() + static_cast<std::size_t>(state - 1) * actions, static_cast<std::size_t>(actions)};
    }
    double& at(int state, int action) { return values[static_cast<std::size_t>(state - 1) * actions + action - 1]; }
    double at(int state, int action) const {
        return values[static_cast<std::size_t>(state - 1) * actions + action - 1];
    }
};

struct AgentState {
    QTable q;
    double inventory = 0.0;
    Rng rng;
};

// epsilon_t = exp(-mu * t)
double epsilon(double t, double mu);

// Greedy with probability 1 - eps (ties broken uniformly at random), uniform
// over all actions otherwise. Returns a 1-based action id.
int select_action(std::span<const double> q_row, double eps, Rng& rng);

// Deterministic argmax (lowest id wins ties); used for policy fingerprints
// and convergence checks.
int greedy_action(std::span<const double> q_row);

// q(s,c) <- (1-alpha) q(s,c) + alpha (r + gamma max_c' q(s',c'))
void q_update(QTable& q, int state, int action, double reward, int next_state, double alpha, double gamma);

// Inventory override: beyond the upper threshold quote (ask 1, bid K), beyond
// the lower one (ask K, bid 1). Identity inside the band.
int apply_skew(int action, double inventory, const AgentConfig& cfg, const JointActionCodec& codec);

// One row per state, space-separated values.
void dump_q_table(std::ostream& os, const QTable& q);

}  // namespace mmfees
