#include <string>
#include <vector>

#include "stharm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stharm::cli::run(args);
}
