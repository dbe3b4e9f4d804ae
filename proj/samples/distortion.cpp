// Word-length lower bounds for the powers of a few infinite-order elements,
// against the default generating set.

#include <iostream>

#include "vagroup/vagroup.hpp"

int main() {
  using namespace vagroup;
  GenSet s = default_genset();
  std::cout << "generators:";
  for (const auto& g : s.generators()) {
    std::cout << " " << g.name;
  }
  std::cout << "\nmax |log2 slope| " << s.stats().max_log2_slope << ", max |Sing| "
            << s.stats().max_sing << "\n";

  for (const char* name : {"x0", "beta", "infinite_orbit", "secant_rate"}) {
    VAElement f = *fixtures::by_name(name);
    DistortionTable t = distortion_table(f, 10, s.stats());
    std::cout << "\n" << name << ": " << describe(t.certificate) << "\n";
    std::cout << "  ratio >= " << t.constant << " when " << t.period << " | k\n";
    std::cout << "  k  lower_bound  ratio  certified\n";
    for (const auto& r : t.rows) {
      std::cout << "  " << r.k << "  " << r.lower_bound << "  " << r.ratio << "  "
                << r.certified << "\n";
    }
  }
}
