#include <iostream>

#include "dea/report.hpp"

int main(int argc, char** argv) { return dea::run_cli(argc, argv, std::cout, std::cerr); }
