#pragma once

namespace dqm {

// Selects the plain loop or the OpenMP loop of a frame- or column-parallel
// kernel. Both produce bit-identical results.
enum class Exec { Serial, Parallel };

}  // namespace dqm
