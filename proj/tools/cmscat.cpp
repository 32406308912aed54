#include <iostream>

#include <CLI11.hpp>

#include "cmscat/errors.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Direct scattering toolkit for the continuum Calogero-Moser Lax operator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    int threads = 1;
    long seed = -1;
    int snapshot_every = -1;
    std::vector<int> orders{0, 1, 2};

    const char* names[] = {"spectrum", "scatter", "trace", "evolve", "reconstruct", "selftest"};
    const char* help[] = {"discrete spectrum and eigenfunctions",
                          "scattering sweep over lambda",
                          "trace formula closures",
                          "CM flow with scattering snapshots",
                          "reconstruct q from its scattering data",
                          "soliton and zero-potential checks"};
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], help[i]);
        auto* c = sub->add_option("--config", config_path, "flat key=value config file");
        if (std::string(names[i]) != "selftest") c->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "seed recorded with the outputs")->check(CLI::NonNegativeNumber);
        if (std::string(names[i]) == "evolve")
            sub->add_option("--snapshot-every", snapshot_every, "steps between snapshots")->check(CLI::PositiveNumber);
        if (std::string(names[i]) == "trace") sub->add_option("--orders", orders, "trace orders (0..4)")->delimiter(',');
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << R"({"error":"config","exit_code":2,"message":"invalid command line"})" << '\n';
        return 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    cmscat::cli::RunOptions o;
    try {
        if (!config_path.empty()) o.config = cmscat::Config::load(config_path);
    } catch (const cmscat::ConfigError& e) {
        cmscat::json j = {{"error", "config"}, {"message", e.what()}, {"exit_code", 2}, {"command", name}};
        std::cerr << j.dump() << '\n';
        return 2;
    }
    o.out_dir = out_dir;
    o.threads = threads;
    if (seed >= 0) o.seed = static_cast<unsigned>(seed);
    if (snapshot_every > 0) o.snapshot_every = snapshot_every;
    o.orders = orders;
    return cmscat::cli::run_command(name, o, std::cout, std::cerr);
}
