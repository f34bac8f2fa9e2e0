#include <vector>

#include "relsim/cli.hpp"

int main(int argc, char** argv) {
    return relsim::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
