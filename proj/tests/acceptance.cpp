#include <iostream>

#include "ergoshift/acceptance.hpp"

int main() {
  const bool ok = ergoshift::print_results(std::cout, ergoshift::run_acceptance());
  std::cout << (ok ? "acceptance: all criteria passed" : "acceptance: FAILED") << "\n";
  return ok ? 0 : 1;
}
