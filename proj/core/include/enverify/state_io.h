#ifndef ENVERIFY_STATE_IO_H
#define ENVERIFY_STATE_IO_H

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "enverify/dense_sim.h"

namespace enverify {

// Debug dump of dense states. Layout, all little endian:
//   "ENVS"  magic
//   u32     version (1)
//   u32     kind (0 = state vector, 1 = density matrix)
//   u32     number of subsystems k
//   u32 x k local dimensions, most significant first
//   f64 x 2 (re, im) per entry, row-major

enum class DumpKind : uint32_t { Vector = 0, Density = 1 };

struct StateDump {
    DumpKind kind = DumpKind::Vector;
    std::vector<uint32_t> dims;
    /// N entries for vectors, N * N for density matrices.
    std::vector<Complex> data;
};

void write_state(std::ostream &out, const StateVector &state);
void write_density(std::ostream &out, const Layout &layout, const Eigen::MatrixXcd &rho);
/// Throws DomainError on a malformed stream.
StateDump read_state(std::istream &in);

}  // namespace enverify

#endif
