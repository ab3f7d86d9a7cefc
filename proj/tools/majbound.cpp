#include <vector>

#include "majbound/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return majbound::cli::run(std::move(args));
}
