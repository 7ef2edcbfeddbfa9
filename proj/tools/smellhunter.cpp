#include <iostream>

#include "smellhunter/cli/app.hpp"

int main(int argc, char** argv) { return smellhunter::cli::run(argc, argv, std::cout, std::cerr); }
