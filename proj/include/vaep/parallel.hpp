#pragma once

namespace vaep {

// Thread budget for the OpenMP kernels. Results never depend on it: every
// parallel loop writes disjoint slots and all reductions run in a fixed order.
void set_jobs(int jobs);
int jobs();

}  // namespace vaep
