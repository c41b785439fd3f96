#include <CLI11.hpp>

#include "fairshield/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fairshield: energy-based runtime fairness shields"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int threads = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory (default: current)");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--threads", threads, "worker threads (0 = hardware)");
    };

    add_common(app.add_subcommand("analyze", "fixpoint, limit cost, burn-in and bound table"));
    add_common(app.add_subcommand("synthesize", "least-invasive shield search"));
    add_common(app.add_subcommand("simulate", "seeded Monte Carlo ensembles"));
    add_common(app.add_subcommand("dp", "exact violation measures by dynamic programming"));
    add_common(app.add_subcommand("replay", "shield a recorded decision stream"));

    CLI11_PARSE(app, argc, argv);

    const std::string verb = app.get_subcommands().front()->get_name();
    nlohmann::json cfg;
    try {
        cfg = fairshield::cli::load_config(config_path);
    } catch (const fairshield::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return fairshield::cli::kExitConfig;
    }
    return fairshield::cli::run_command(verb, cfg, out_dir, seed, threads);
}
