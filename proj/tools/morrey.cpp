#include "morrey/cli.hpp"

int main(int argc, char** argv)
{
    return morrey::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
