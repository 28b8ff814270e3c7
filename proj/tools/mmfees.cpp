#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "mmfees/config.hpp"
#include "mmfees/game.hpp"
#include "mmfees/simulation.hpp"
#include "mmfees/sweep.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNonConvergent = 3;

mmfees::ExperimentConfig load_or_default(const std::string& path) {
    if (path.empty()) {
        mmfees::ExperimentConfig cfg;
        mmfees::validate_config(cfg);
        return cfg;
    }
    return mmfees::load_config(path);
}

void print_matrix_tables(std::ostream& os, const mmfees::RewardMatrix& matrix) {
    for (int agent = 0; agent < matrix.n_agents; ++agent) {
        os << "# agent " << (agent + 1)
           << " expected reward; rows own action 1.." << matrix.n_actions
           << ", columns competitor action 1.." << matrix.n_actions << "\n";
        os << std::fixed << std::setprecision(1);
        for (int own = 1; own <= matrix.n_actions; ++own) {
            for (int other = 1; other <= matrix.n_actions; ++other) {
                // column player is the competitor of the row player
                const int profile[2] = {agent == 0 ? own : other, agent == 0 ? other : own};
                if (other > 1) os << ' ';
                os << std::setw(6) << matrix.at(profile, agent);
            }
            os << '\n';
        }
        os << '\n';
    }
}

void print_equilibria(std::ostream& os, const mmfees::RewardMatrix& matrix,
                      const mmfees::EquilibriumReport& report) {
    os << std::fixed << std::setprecision(3);
    os << "pure Nash equilibria: " << report.pure_nash.size() << "\n";
    for (std::size_t i = 0; i < report.pure_nash.size(); ++i) {
        os << "  profile " << mmfees::format_profile(report.pure_nash[i]) << "  rewards";
        for (int a = 0; a < matrix.n_agents; ++a) os << ' ' << matrix.at(report.pure_nash[i], a);
        os << "  joint " << report.pure_nash_joint_profit[i] << "\n";
    }
    os << "cooperative strategies: " << report.cooperative.size() << "\n";
    for (std::size_t i = 0; i < report.cooperative.size(); ++i) {
        os << "  profile " << mmfees::format_profile(report.cooperative[i]) << "  joint profit "
           << report.cooperative_joint_profit[i] << "\n";
    }
}

int cmd_matrix(const std::string& config_path, std::optional<double> beta, std::optional<double> eta) {
    mmfees::ExperimentConfig cfg = load_or_default(config_path);
    if (beta) cfg.fees.beta = *beta;
    if (eta) cfg.fees.eta = *eta;

    const mmfees::RewardMatrix matrix = mmfees::build_reward_matrix(cfg.market, cfg.fees);
    if (cfg.market.n_agents == 2) print_matrix_tables(std::cout, matrix);
    else
        std::cout << "# " << cfg.market.n_agents
                  << " agents; per-agent tables omitted (tensor), equilibrium report below\n";
    print_equilibria(std::cout, matrix, mmfees::classify_equilibria(matrix));
    return 0;
}

int cmd_run(const std::string& config_path, std::optional<std::int64_t> seed, int threads,
            const std::string& dump_q_prefix) {
    mmfees::ExperimentConfig cfg = load_or_default(config_path);
    if (seed) cfg.base_seed = *seed;

    const mmfees::AggregateResult agg = mmfees::run_experiment(cfg, threads);
    std::cout << std::fixed << std::setprecision(6);
    std::cout << "instances        " << agg.n_instances << "\n";
    std::cout << "converged        " << agg.n_converged << " (rate " << agg.convergence_rate << ")\n";
    std::cout << "net_fee          " << agg.net_fee_mean << " (" << agg.net_fee_std << ")\n";
    std::cout << "orders_per_agent " << agg.orders_mean << " (" << agg.orders_std << ")\n";
    std::cout << "modal_profile    " << mmfees::format_profile(agg.modal_profile) << " (fraction "
              << agg.modal_fraction << ")\n";
    for (std::size_t i = 0; i < agg.instances.size(); ++i) {
        const mmfees::InstanceResult& r = agg.instances[i];
        std::cout << "instance " << i << ": converged=" << (r.converged ? 1 : 0)
                  << " periods=" << r.periods_run
                  << " net_fee=" << (r.net_fee ? *r.net_fee : std::nan(""))
                  << " orders=" << r.orders_per_agent
                  << " modal=" << mmfees::format_profile(r.modal_profile) << "\n";
    }

    if (!dump_q_prefix.empty() && !agg.instances.empty()) {
        const mmfees::InstanceResult& first = agg.instances.front();
        for (std::size_t a = 0; a < first.q_tables.size(); ++a) {
            const std::string path = dump_q_prefix + "_agent" + std::to_string(a) + ".txt";
            std::ofstream out(path);
            if (!out) {
                std::cerr << "cannot write " << path << "\n";
                return 1;
            }
            out << std::setprecision(17);
            mmfees::dump_q_table(out, first.q_tables[a]);
        }
    }
    return agg.n_converged == agg.n_instances ? 0 : kExitNonConvergent;
}

int cmd_sweep(const std::string& config_path, const std::string& table, const std::string& out_path,
              int threads) {
    mmfees::ExperimentConfig cfg = load_or_default(config_path);
    const std::vector<mmfees::SweepRow> rows = mmfees::run_sweep(table, cfg, threads, &std::cerr);

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 1;
    }
    mmfees::write_csv(out, rows);

    for (const mmfees::SweepRow& row : rows)
        if (row.result.n_converged != row.result.n_instances) return kExitNonConvergent;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maker-taker fee market-making simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string table;
    std::string out_path = "results.csv";
    std::string dump_q_prefix;
    std::optional<double> beta, eta;
    std::optional<std::int64_t> seed;
    int threads = 0;

    CLI::App* matrix = app.add_subcommand("matrix", "Exact one-period reward matrix and equilibria");
    matrix->add_option("--config", config_path, "key=value config file");
    matrix->add_option("--beta", beta, "override maker rebate");
    matrix->add_option("--eta", eta, "override taker fee");

    CLI::App* run = app.add_subcommand("run", "One experiment: n_instances learning runs");
    run->add_option("--config", config_path, "key=value config file");
    run->add_option("--seed", seed, "override base seed");
    run->add_option("--threads", threads, "worker threads (0 = hardware)");
    run->add_option("--dump-q", dump_q_prefix, "write instance-0 Q-tables to <prefix>_agentN.txt");

    CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep for one report table");
    sweep->add_option("--table", table, "1|2|3|4|5 or maker-taker|taker-maker|volatility|inventory|agents")
        ->required();
    sweep->add_option("--config", config_path, "key=value config file");
    sweep->add_option("--out", out_path, "output CSV path");
    sweep->add_option("--threads", threads, "worker threads (0 = hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (matrix->parsed()) return cmd_matrix(config_path, beta, eta);
        if (run->parsed()) return cmd_run(config_path, seed, threads, dump_q_prefix);
        if (sweep->parsed()) return cmd_sweep(config_path, table, out_path, threads);
    } catch (const mmfees::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
