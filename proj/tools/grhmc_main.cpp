#include <vector>

#include "grhmc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return grhmc::cli::dispatch(args);
}
