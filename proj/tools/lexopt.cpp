#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lexopt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> env_seed;
  if (const char* s = std::getenv("LEXOPT_SEED")) env_seed = s;

  const auto result = lexopt::cli::run(args, env_seed);
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}
