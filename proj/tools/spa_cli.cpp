// Command-line front end: partition, select, evaluate, benchmark, sweep.

#include "spa/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    spa::RunConfig cfg;
    CLI::App app{"Structural-clustering active learning for graph node classification"};
    app.set_config("--config", "", "key=value config file; command-line flags override it");
    app.fallthrough();
    app.require_subcommand(1);

    app.add_option("--edges", cfg.edges_path, "Edge list, one 'u v' pair per line");
    app.add_option("--features", cfg.features_path, "Feature CSV, one row per node");
    app.add_option("--labels", cfg.labels_path, "Labels, one class id per line");
    app.add_option("--synthetic", cfg.synthetic,
                   "Generate a graph instead: sbm:blocks,n,p_in,p_out,feature_snr,seed[,dim]");
    app.add_flag("--row-normalize", cfg.row_normalize, "Scale feature rows to unit L1 norm");

    app.add_option("--strategy", cfg.strategies, "Strategies: " + spa::strategy_list())->delimiter(',');
    app.add_option("--epsilon", cfg.scan.epsilon, "SCAN similarity threshold")->capture_default_str();
    app.add_option("--mu", cfg.scan.mu, "SCAN minimum shared closed neighbors")->capture_default_str();
    app.add_option("--damping", cfg.pagerank.damping, "PageRank damping")->capture_default_str();
    app.add_option("--tolerance", cfg.pagerank.tolerance, "PageRank L1 tolerance")->capture_default_str();
    app.add_option("--max-iterations", cfg.pagerank.max_iterations, "PageRank iteration cap")
        ->capture_default_str();
    app.add_option("--featprop-steps", cfg.featprop_steps, "Propagation steps for featprop")
        ->capture_default_str();
    app.add_option("--budgets", cfg.budgets, "Labeling budgets")->delimiter(',');
    app.add_option("--seeds", cfg.seeds, "Seeds")->delimiter(',');
    app.add_option("--epochs", cfg.train.epochs, "Training epochs")->capture_default_str();
    app.add_option("--lr", cfg.train.learning_rate, "Adam learning rate")->capture_default_str();
    app.add_option("--weight-decay", cfg.train.weight_decay, "L2 weight decay")->capture_default_str();
    app.add_option("--hidden", cfg.train.hidden_units, "Hidden units")->capture_default_str();
    app.add_option("--jobs", cfg.jobs, "Parallel runs for evaluate")->capture_default_str();
    app.add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
    app.add_option("--repetitions", cfg.repetitions, "Timing repetitions for benchmark")
        ->capture_default_str();
    app.add_option("--epsilons", cfg.sweep_epsilons, "Sweep grid for epsilon")->delimiter(',');
    app.add_option("--mus", cfg.sweep_mus, "Sweep grid for mu")->delimiter(',');

    auto* partition = app.add_subcommand("partition", "SCAN communities to communities.csv");
    auto* select = app.add_subcommand("select", "Selection JSON per strategy, budget and seed");
    auto* evaluate = app.add_subcommand("evaluate", "Train and score a GCN per selection");
    auto* benchmark = app.add_subcommand("benchmark", "Median/p95 query time per strategy");
    auto* sweep = app.add_subcommand("sweep", "Community counts over an epsilon x mu grid");

    CLI11_PARSE(app, argc, argv);

    if (*partition) return spa::cmd_partition(cfg, std::cout, std::cerr);
    if (*select) return spa::cmd_select(cfg, std::cout, std::cerr);
    if (*evaluate) return spa::cmd_evaluate(cfg, std::cout, std::cerr);
    if (*benchmark) return spa::cmd_benchmark(cfg, std::cout, std::cerr);
    if (*sweep) return spa::cmd_sweep(cfg, std::cout, std::cerr);
    return 1;
}
