// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "restaurant/cli.hpp"

int main(int argc, char** argv) { return restaurant::cli::run(argc, argv, std::cout, std::cerr); }
