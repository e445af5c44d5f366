#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <sdattn/cli.hpp>

namespace sdattn::cli {

struct parse_outcome {
    std::optional<run_config> config; // empty when the process should exit
    int exit_code = exit_ok;
};

/// Maps argv onto a run_config. Usage errors exit with code 3.
inline parse_outcome parse_args(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compile propositional definite programs into attention parameters and run them"};
    app.require_subcommand(1);

    run_config cfg;
    std::string format = "text";
    std::string engine = "both";

    auto shared = [&](CLI::App* sub) {
        sub->add_option("--max-steps", cfg.max_steps, "Layer limit per derivation")
            ->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--engine", engine, "Engine(s) to run")
            ->check(CLI::IsMember({"attention", "symbolic", "both"}));
        sub->add_flag("--trace", cfg.trace, "Print every step");
        sub->add_flag("--full-trace", cfg.full_trace, "Keep deriving after false appears");
    };

    auto* compile_cmd = app.add_subcommand("compile", "Print H, B and M for a program");
    compile_cmd->add_option("file", cfg.program_path, "Program file (.lp)")->required();
    shared(compile_cmd);

    auto* prove_cmd = app.add_subcommand("prove", "Top-down derivation of a query");
    prove_cmd->add_option("file", cfg.program_path, "Program file (.lp)")->required();
    prove_cmd->add_option("--query,-q", cfg.query, "Query, e.g. 'p & q'")->required();
    shared(prove_cmd);

    auto* model_cmd = app.add_subcommand("model", "Bottom-up least model");
    model_cmd->add_option("file", cfg.program_path, "Program file (.lp)")->required();
    shared(model_cmd);

    auto* gen_cmd = app.add_subcommand("gen", "Emit a random completed program");
    gen_cmd->add_option("--symbols,-n", cfg.n_symbols, "Number of symbols")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed,-s", cfg.seed, "Random seed (default 0)");
    shared(gen_cmd);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return {std::nullopt, exit_ok};
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return {std::nullopt, exit_input_error};
    }

    if (*compile_cmd) cfg.cmd = command::compile;
    else if (*prove_cmd) cfg.cmd = command::prove;
    else if (*model_cmd) cfg.cmd = command::model;
    else cfg.cmd = command::gen;

    cfg.format = format == "json" ? output_format::json : output_format::text;
    cfg.engine = engine == "attention" ? engine_choice::attention
               : engine == "symbolic"  ? engine_choice::symbolic
                                       : engine_choice::both;
    return {cfg, exit_ok};
}

} // namespace sdattn::cli
