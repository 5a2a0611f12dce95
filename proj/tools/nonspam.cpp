#include <iostream>

#include "nonspam/commands.hpp"

int main(int argc, char** argv) { return nonspam::run_cli(argc, argv, std::cout, std::cerr); }
