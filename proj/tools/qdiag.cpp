#include <iostream>
#include <string>
#include <vector>

#include <qdiag/cli.hpp>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qdiag::cli::run(std::move(args), std::cout, std::cerr);
}
