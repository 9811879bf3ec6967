#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "mtlab/error.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  mtlab::cli::RunConfig config;
  try {
    config = mtlab::cli::parse_args(args);
  } catch (const mtlab::cli::InfoRequest& info) {
    std::cout << info.what();
    return mtlab::cli::ok;
  } catch (const mtlab::Error& e) {
    std::cerr << "mtlab: " << e.what() << "\n";
    return mtlab::cli::validation;
  }
  return mtlab::cli::run(config, std::cout, std::cerr);
}
