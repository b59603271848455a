#include "mgsim/caseio.hpp"

#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mgsim::io::cli_run(args);
}
