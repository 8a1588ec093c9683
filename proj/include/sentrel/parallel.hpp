#pragma once

namespace sentrel {

// Every data-parallel kernel has a serial reference path selected by this
// policy. Both paths must produce identical results.
enum class Exec { serial, parallel };

// Worker count for parallel kernels; 0 keeps the OpenMP default.
void set_worker_count(int workers);
int worker_count();

}  // namespace sentrel
