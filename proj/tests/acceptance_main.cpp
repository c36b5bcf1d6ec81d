#include <iostream>

#include "armsim/checks.hpp"

int main() {
  return armsim::run_checks(std::cout) ? 0 : 1;
}
