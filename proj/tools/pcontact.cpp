#include <iostream>

#include "pcontact/cli.hpp"

int main(int argc, char** argv) { return pcontact::cli::run(argc, argv, std::cout, std::cerr); }
