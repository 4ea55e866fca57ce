#pragma once

namespace solsim {

// Execution policy for batch kernels. Every parallel kernel has a serial
// twin that produces bit-identical results; the serial path is the
// reference implementation used by the equivalence tests and the
// benchmark baseline.
enum class Exec {
    serial,
    openmp,
};

} // namespace solsim
