#include "mmfees/sweep.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mmfees {

namespace {

// Maker rebate beta with the standard 0.05 access-fee markup; the no-fee
// setting keeps eta at zero as well.
FeeSchedule fee_pair(double beta) {
    return beta == 0.0 ? FeeSchedule{0.0, 0.0} : FeeSchedule{beta, beta + 0.05};
}

std::string canonical_table(const std::string& table) {
    if (table == "1" || table == "maker-taker") return "1";
    if (table == "2" || table == "taker-maker") return "2";
    if (table == "3" || table == "volatility") return "3";
    if (table == "4" || table == "inventory") return "4";
    if (table == "5" || table == "agents") return "5";
    throw std::invalid_argument("unknown sweep table: " + table);
}

}  // namespace

std::vector<SweepRow> run_sweep(const std::string& table, const ExperimentConfig& base, int threads,
                                std::ostream* progress) {
    const std::string id = canonical_table(table);
    std::vector<ExperimentConfig> cells;

    if (id == "1") {
        const std::vector<std::pair<double, std::vector<double>>> grid = {
            {0.00, {0.0, 0.1}},
            {0.50, {0.0, 0.1}},
            {0.95, {0.0, 0.1, 0.2, 0.3}},
            {0.99, {0.0, 0.1, 0.2, 0.5}},
        };
        for (const auto& [gamma, betas] : grid)
            for (double beta : betas) {
                ExperimentConfig cfg = base;
                cfg.agent.gamma = gamma;
                cfg.fees = fee_pair(beta);
                cells.push_back(cfg);
            }
    } else if (id == "2") {
        for (double beta : {-0.15, -0.45, -0.75}) {
            ExperimentConfig cfg = base;
            cfg.fees = fee_pair(beta);
            cells.push_back(cfg);
        }
    } else if (id == "3") {
        for (double sigma : {0.2, 0.6, 1.0}) {
            ExperimentConfig cfg = base;
            cfg.fees = fee_pair(0.2);
            cfg.market.sigma = sigma;
            cells.push_back(cfg);
        }
    } else if (id == "4") {
        for (double xi : {0.0, 0.1, 0.2, 0.3}) {
            ExperimentConfig cfg = base;
            cfg.fees = fee_pair(0.2);
            cfg.market.xi = xi;
            cells.push_back(cfg);
        }
    } else {
        for (int n : {4, 6, 8}) {
            ExperimentConfig cfg = base;
            cfg.fees = fee_pair(0.0);
            cfg.market.n_agents = n;
            cells.push_back(cfg);
        }
    }

    std::vector<SweepRow> rows;
    rows.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (progress)
            *progress << "table " << id << ": cell " << (i + 1) << "/" << cells.size()
                      << " (gamma=" << cells[i].agent.gamma << " beta=" << cells[i].fees.beta
                      << " sigma=" << cells[i].market.sigma << " xi=" << cells[i].market.xi
                      << " N=" << cells[i].market.n_agents << ")" << std::endl;
        SweepRow row;
        row.table_id = id;
        row.cfg = cells[i];
        row.result = run_experiment(cells[i], threads);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_header() {
    return "table_id,gamma,beta,eta,sigma,xi,n_agents,net_fee_mean,net_fee_std,orders_mean,"
           "orders_std,convergence_rate,modal_profile,modal_fraction";
}

std::string csv_row(const SweepRow& row) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6);
    const AggregateResult& r = row.result;
    os << row.table_id << ',' << row.cfg.agent.gamma << ',' << row.cfg.fees.beta << ','
       << row.cfg.fees.eta << ',' << row.cfg.market.sigma << ',' << row.cfg.market.xi << ','
       << row.cfg.market.n_agents << ',' << r.net_fee_mean << ',' << r.net_fee_std << ','
       << r.orders_mean << ',' << r.orders_std << ',' << r.convergence_rate << ','
       << format_profile(r.modal_profile) << ',' << r.modal_fraction;
    return os.str();
}

void write_csv(std::ostream& os, std::span<const SweepRow> rows) {
    os << csv_header() << '\n';
    for (const SweepRow& row : rows) os << csv_row(row) << '\n';
}

}  // namespace mmfees
