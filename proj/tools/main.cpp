#include <vector>

#include "hiercls/cli.hpp"

int main(int argc, char** argv) {
  return hiercls::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
