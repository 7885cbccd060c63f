#include <string>
#include <vector>

#include "romanlens/cli.hpp"

int main(int argc, char** argv) {
  return romanlens::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
