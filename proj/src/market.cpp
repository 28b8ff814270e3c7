#include "mmfees/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mmfees {

PriceGrid PriceGrid::uniform(int levels) {
    PriceGrid g;
    g.deltas.resize(levels);
    for (int k = 0; k < levels; ++k) g.deltas[k] = static_cast<double>(k + 1);
    return g;
}

int MarketParams::max_order_size() const {
    return static_cast<int>(std::llround(volume_per_agent * n_agents));
}

std::vector<double> level_weights(const PriceGrid& grid, const FeeSchedule& fees, double c0, double c1) {
    std::vector<double> w(grid.deltas.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double x = std::max(grid.deltas[k] + fees.eta - c0, 0.0);
        w[k] = c1 * x * x;
    }
    return w;
}

QuoteCurve make_quote_curve(int level, const MarketParams& params, double concentration) {
    const int k = params.grid.levels();
    if (level < 1 || level > k) throw std::out_of_range("quote level out of range");
    const double v = params.volume_per_agent;
    const double rest = k > 1 ? (1.0 - concentration) / (k - 1) : 0.0;
    QuoteCurve curve(k, rest * v);
    curve[level - 1] = concentration * v;
    return curve;
}

double arrival_probability(std::span<const double> side, std::span<const double> weights, double sigma) {
    const int k = static_cast<int>(side.size());
    double num = 0.0;
    double depth = 0.0;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        num += weights[i] * side[i];
        depth += static_cast<double>(k - i) * side[i];
        total += side[i];
    }
    if (total <= 0.0) return 0.0;
    const double f = num / (sigma * kFlowDepthScale * depth);
    return std::exp(-f);
}

int sample_order_size(double p, int max_size, Rng& rng) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return max_size;
    int m = 0;
    for (int i = 0; i < max_size; ++i) m += rng.bernoulli(p) ? 1 : 0;
    return m;
}

void match_side_into(std::span<const double> quotes, int agents, int levels, double order_size,
                     std::span<double> fills_out) {
    std::fill(fills_out.begin(), fills_out.end(), 0.0);
    double remaining = std::max(order_size, 0.0);
    for (int k = 0; k < levels && remaining > 0.0; ++k) {
        double level_volume = 0.0;
        for (int i = 0; i < agents; ++i) level_volume += quotes[static_cast<std::size_t>(i) * levels + k];
        if (level_volume <= 0.0) continue;
        if (remaining >= level_volume) {
            for (int i = 0; i < agents; ++i)
                fills_out[static_cast<std::size_t>(i) * levels + k] = quotes[static_cast<std::size_t>(i) * levels + k];
            remaining -= level_volume;
        } else {
            const double share = remaining / level_volume;
            for (int i = 0; i < agents; ++i)
                fills_out[static_cast<std::size_t>(i) * levels + k] =
                    share * quotes[static_cast<std::size_t>(i) * levels + k];
            remaining = 0.0;
        }
    }
}

Fills match_side(std::span<const double> quotes, int agents, int levels, double order_size) {
    Fills fills(agents, levels);
    match_side_into(quotes, agents, levels, order_size, fills.data);
    return fills;
}

double period_reward(std::span<const double> ask_fills, std::span<const double> bid_fills,
                     const PriceGrid& grid, double beta, double xi, double dy) {
    double r = 0.0;
    for (std::size_t k = 0; k < ask_fills.size(); ++k) r += ask_fills[k] * (grid.deltas[k] + beta);
    for (std::size_t k = 0; k < bid_fills.size(); ++k) r += bid_fills[k] * (grid.deltas[k] + beta);
    return r - xi * dy * dy;
}

double inventory_update(double y_prev, double bid_total, double ask_total) {
    return y_prev + bid_total - ask_total;
}

std::vector<double> binomial_pmf(int size, double p) {
    std::vector<double> pmf(static_cast<std::size_t>(size) + 1, 0.0);
    if (p <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p >= 1.0) {
        pmf[size] = 1.0;
        return pmf;
    }
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double lg_n = std::lgamma(size + 1.0);
    for (int m = 0; m <= size; ++m) {
        const double lg = lg_n - std::lgamma(m + 1.0) - std::lgamma(size - m + 1.0);
        pmf[m] = std::exp(lg + m * log_p + (size - m) * log_q);
    }
    return pmf;
}

}  // namespace mmfees
