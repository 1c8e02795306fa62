#include <iostream>

#include "provgame/cli.hpp"

int main(int argc, char** argv) {
  return provgame::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
