#include <iostream>

#include "acceptance.hpp"

int main() {
  auto results = pfg::acceptance::run_all(std::cout);
  bool ok = pfg::acceptance::all_passed(results);
  std::cout << (ok ? "all criteria passed" : "some criteria FAILED") << "\n";
  return ok ? 0 : 1;
}
