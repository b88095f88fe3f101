// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  std::vector<std::string> args(argv + 1, argv + argc);
  int code = bacon::cli::run(args, std::cin, std::cout, std::cerr);
  std::cout.flush();
  return code;
}
