#include <string>
#include <vector>

#include "rmts/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return rmts::cli::run(args);
}
