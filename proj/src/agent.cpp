#include "mmfees/agent.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace mmfees {

int StateCodec::bucket(std::span<const double> side) const {
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t k = 0; k < side.size(); ++k) {
        total += side[k];
        weighted += static_cast<double>(k + 1) * side[k];
    }
    if (total <= 0.0) return levels;
    const int b = static_cast<int>(weighted / total);
    return std::clamp(b, 1, levels);
}

double epsilon(double t, double mu) {
    return std::exp(-mu * t);
}

int greedy_action(std::span<const double> q_row) {
    int best = 0;
    for (std::size_t c = 1; c < q_row.size(); ++c)
        if (q_row[c] > q_row[best]) best = static_cast<int>(c);
    return best + 1;
}

int select_action(std::span<const double> q_row, double eps, Rng& rng) {
    const int n = static_cast<int>(q_row.size());
    if (eps > 0.0 && rng.uniform() < eps) return rng.uniform_int(n) + 1;
    double best = q_row[0];
    int ties = 1;
    int pick = 0;
    for (int c = 1; c < n; ++c) {
        if (q_row[c] > best) {
            best = q_row[c];
            ties = 1;
            pick = c;
        } else if (q_row[c] == best) {
            // reservoir draw keeps the tie-break uniform in one pass
            ++ties;
            if (rng.uniform_int(ties) == 0) pick = c;
        }
    }
    return pick + 1;
}

void q_update(QTable& q, int state, int action, double reward, int next_state, double alpha, double gamma) {
    auto next = q.row(next_state);
    double best_next = next[0];
    for (std::size_t c = 1; c < next.size(); ++c) best_next = std::max(best_next, next[c]);
    double& cell = q.at(state, action);
    cell = (1.0 - alpha) * cell + alpha * (reward + gamma * best_next);
}

int apply_skew(int action, double inventory, const AgentConfig& cfg, const JointActionCodec& codec) {
    if (inventory > cfg.skew_upper) return codec.encode(1, codec.levels);
    if (inventory < cfg.skew_lower) return codec.encode(codec.levels, 1);
    return action;
}

void dump_q_table(std::ostream& os, const QTable& q) {
    for (int s = 1; s <= q.states; ++s) {
        auto row = q.row(s);
        for (int c = 0; c < q.actions; ++c) {
            if (c) os << ' ';
            os << row[c];
        }
        os << '\n';
    }
}

}  // namespace mmfees
