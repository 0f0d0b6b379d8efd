#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return rushlarsen::cli::run(argc, argv, std::cerr); }
