// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return emsurf::run_cli(argc, argv, std::cout, std::cerr); }
