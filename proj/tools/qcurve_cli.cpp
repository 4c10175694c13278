#include <iostream>

#include <qcurve/cli.hpp>

int main(int argc, char **argv)
{
    return qcurve::cli::run(argc, argv, std::cout, std::cerr);
}
