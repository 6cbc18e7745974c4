#include "entnorms/selftest.hpp"

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    entnorms::SelftestOptions opts;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--seed" && i + 1 < argc) {
            opts.seed = static_cast<uint64_t>(std::strtoull(argv[++i], nullptr, 10));
        } else if (arg == "--only" && i + 1 < argc) {
            opts.only.push_back(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--seed N] [--only CRITERION]\n";
            return 4;
        }
    }
    const auto results = entnorms::run_acceptance(opts, &std::cout);
    return entnorms::all_passed(results) ? 0 : 1;
}
