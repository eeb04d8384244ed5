#include <iostream>

#include "footfall/app/commands.hpp"

int main(int argc, char** argv) { return footfall::app::run_cli(argc, argv, std::cout, std::cerr); }
