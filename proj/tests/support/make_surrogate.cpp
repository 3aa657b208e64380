#include <cstdlib>
#include <iostream>

#include "surrogate.hpp"

// Usage: make_surrogate <dir> [seed]
int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_surrogate <dir> [seed]\n";
    return 2;
  }
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 2016;
  std::cout << surrogate::write(argv[1], seed).string() << '\n';
  return 0;
}
