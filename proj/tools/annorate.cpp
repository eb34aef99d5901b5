#include "annorate/cli.hpp"

int main(int argc, char** argv)
{
    return annorate::cli::run(argc, argv);
}
