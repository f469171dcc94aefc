// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "laborcast_app/commands.hpp"

int main(int argc, char** argv) { return laborcast::app::run_cli(argc, argv, std::cout, std::cerr); }
