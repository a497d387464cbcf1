#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace dmnls {

/// Worker count used by node-parallel loops. 0 selects hardware concurrency.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(i) for i in [0, count). Iterations must write disjoint outputs.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation; result depends only on the input order.
double pairwise_sum(std::span<const double> values);

}  // namespace dmnls
