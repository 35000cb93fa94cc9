#include <iostream>

#include "mrpn/cli.hpp"

int main(int argc, char** argv) {
  return mrpn::run_cli(std::vector<std::string>(argv, argv + argc), std::cin, std::cout, std::cerr);
}
