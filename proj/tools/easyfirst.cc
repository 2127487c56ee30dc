#include <iostream>

#include "easyfirst/cli.h"

int main(int argc, char** argv) { return easyfirst::RunCli(argc, argv, std::cout, std::cerr); }
