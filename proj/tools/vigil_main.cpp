#include <string>
#include <vector>

#include "vigil/cli.hpp"

int main(int argc, char** argv) {
  return vigil::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
