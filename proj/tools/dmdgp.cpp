#include "dmdgp/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return dmdgp::cli::run_cli(args);
}
