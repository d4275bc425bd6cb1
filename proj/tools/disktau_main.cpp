#include "disktau/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return disktau::run(argc, argv, std::cout, std::cerr); }
