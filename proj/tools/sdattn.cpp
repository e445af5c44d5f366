#include <iostream>
#include <string>
#include <vector>

#include "cli_args.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto parsed = sdattn::cli::parse_args(std::move(args), std::cout, std::cerr);
    if (!parsed.config)
        return parsed.exit_code;
    return sdattn::cli::run(*parsed.config, std::cout, std::cerr);
}
