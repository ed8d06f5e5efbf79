#include <string>
#include <vector>

#include "netinf/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return netinf::cli::run_cli(args);
}
