#pragma once

#include <span>
#include <vector>

#include "mmfees/rng.hpp"

namespace mmfees {

// Spread levels on one side of the mid-price, in ticks, strictly ascending.
struct PriceGrid {
    std::vector<double> deltas;

    static PriceGrid uniform(int levels);

    int levels() const { return static_cast<int>(deltas.size()); }
};

// Per-level volumes quoted by one agent on one side.
using QuoteCurve = std::vector<double>;

struct AggregateBook {
    std::vector<double> ask;
    std::vector<double> bid;
};

// Maker rebate and taker access fee, per share, in ticks. Both signed; a
// negative pair is the taker-maker regime.
struct FeeSchedule {
    double beta = 0.0;
    double eta = 0.0;
};

struct MarketParams {
    PriceGrid grid = PriceGrid::uniform(4);
    double sigma = 0.4;            // mid-price volatility
    double c0 = 1.0;               // weight polynomial offset
    double c1 = 0.2;               // weight polynomial scale
    double volume_per_agent = 20.0;
    int n_agents = 2;
    double xi = 0.05;              // inventory risk aversion

    // Largest market-order size per side per period: the volume resting in
    // the book on that side.
    int max_order_size() const;
};

// Per-agent, per-level executed volumes on one side.
struct Fills {
    int agents = 0;
    int levels = 0;
    std::vector<double> data;

    Fills() = default;
    Fills(int n, int k) : agents(n), levels(k), data(static_cast<std::size_t>(n) * k, 0.0) {}

    double& at(int agent, int level_ix) { return data[static_cast<std::size_t>(agent) * levels + level_ix]; }
    double at(int agent, int level_ix) const { return data[static_cast<std::size_t>(agent) * levels + level_ix]; }
    std::span<const double> row(int agent) const {
        return {data.data() + static_cast<std::size_t>(agent) * levels, static_cast<std::size_t>(levels)};
    }
};

// Depth normalization of the arrival exponent: quoted volume is weighted by
// remaining book levels above it, so concentration near the touch damps the
// spread penalty. Calibration constant of the order-arrival model.
inline constexpr double kFlowDepthScale = 0.48740;

// w_k = c1 * max(delta_k + eta - c0, 0)^2
std::vector<double> level_weights(const PriceGrid& grid, const FeeSchedule& fees, double c0, double c1);

// 70/10-style curve: `concentration` of the volume at `level` (1-based), the
// rest spread evenly over the remaining levels.
QuoteCurve make_quote_curve(int level, const MarketParams& params, double concentration = 0.7);

// Per-order arrival probability for one side. Empty side -> 0.
double arrival_probability(std::span<const double> side, std::span<const double> weights, double sigma);

// One Binomial(max_size, p) draw, exact for any p in [0, 1].
int sample_order_size(double p, int max_size, Rng& rng);

// Price-priority matching with pro-rata splitting at the marginal level.
// `quotes` is row-major agents x levels. Excess order size is dropped.
Fills match_side(std::span<const double> quotes, int agents, int levels, double order_size);

// No-allocation variant; `fills_out` must hold agents*levels entries.
void match_side_into(std::span<const double> quotes, int agents, int levels, double order_size,
                     std::span<double> fills_out);

// One agent's reward for one period: spread plus rebate on every executed
// share, less the quadratic inventory-change penalty.
double period_reward(std::span<const double> ask_fills, std::span<const double> bid_fills,
                     const PriceGrid& grid, double beta, double xi, double dy);

double inventory_update(double y_prev, double bid_total, double ask_total);

// pmf of Binomial(size, p), length size+1; exact at p = 0 and p = 1.
std::vector<double> binomial_pmf(int size, double p);

}  // namespace mmfees
