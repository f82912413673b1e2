#include <cstdio>
#include <iostream>
#include <string>

#include <unistd.h>

#include "CLI11.hpp"
#include "simseql/session.hpp"

int main(int argc, char** argv) {
    CLI::App app{"simseql: similarity-query engine REPL and batch runner"};
    std::string script, data_dir = ".", output = "table";
    bool explain_all = false;
    uint64_t seed = 1234;
    app.add_option("--script", script, "run this file instead of the REPL");
    app.add_option("--data-dir", data_dir, "base directory for LOAD and ppm: paths");
    app.add_option("--output", output, "result format")
        ->check(CLI::IsMember({"table", "tsv", "records"}));
    app.add_flag("--explain-all", explain_all, "print the plan before every query");
    app.add_option("--seed", seed, "seed for randomized index construction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    simseql::SessionConfig cfg;
    cfg.output = *simseql::parse_output_mode(output);
    cfg.explain_all = explain_all;
    cfg.data_dir = data_dir;
    cfg.seed = seed;
    simseql::Session session(std::move(cfg));

    if (!script.empty()) return session.run_script(script, std::cout, std::cerr);
    return session.repl(std::cin, std::cout, std::cerr, isatty(fileno(stdin)) != 0);
}
