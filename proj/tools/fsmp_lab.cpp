#include <string>
#include <vector>

#include "fsmp/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return fsmp::cli::run(std::move(args));
}
