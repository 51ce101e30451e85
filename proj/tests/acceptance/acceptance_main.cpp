#include "acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

// Usage: acceptance [filter]
int main(int argc, char** argv) {
  tfnp::acceptance::Options o;
  if (argc > 1) o.filter = argv[1];
  if (const char* seed = std::getenv("TFNP_SEED")) o.seed = std::strtoull(seed, nullptr, 10);
  std::size_t failed = 0, total = 0;
  tfnp::acceptance::run(o, [&](const tfnp::acceptance::CriterionResult& r) {
    ++total;
    failed += !r.pass;
    std::cout << tfnp::acceptance::format_line(r) << std::endl;
  });
  std::cout << (total - failed) << "/" << total << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
