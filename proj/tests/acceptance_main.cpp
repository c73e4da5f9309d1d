#include <iostream>
#include <string>
#include <vector>

#include "honeylat/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  bool ok = honeylat::run_acceptance(which, std::cout);
  return ok ? 0 : 4;
}
