#pragma once

#include <cstddef>

#include "vagroup/vamap.hpp"

namespace vagroup {

// Search limits shared by the dynamics, reduction and certificate code.
struct Bounds {
  std::size_t n_max = 64;          // tree-pair order search
  std::size_t max_steps = 10000;   // orbit iteration
  std::size_t max_bits = 4096;     // largest coordinate allowed in a trace
  std::size_t piece_budget = kDefaultPieceBudget;
  std::size_t growth_horizon = 8;  // powers checked for singular growth
};

}  // namespace vagroup
