#include <string>
#include <vector>

#include "tgbench/cli.hpp"

int main(int argc, char** argv) {
  return tgbench::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
