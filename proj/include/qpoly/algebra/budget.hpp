#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace qpoly::algebra {

class Field;

/// Enumeration guard: rejects F_q^l with l*log2(q) above the cap. Default 24,
/// or QPOLY_ENUM_CAP from the environment.
int enum_cap_bits();
void set_enum_cap_bits(int bits);
void check_enum_budget(int ell, const Field& field);

/// Largest number of subspaces a SubspaceLattice will materialise.
std::uint64_t lattice_size_cap();
void set_lattice_size_cap(std::uint64_t n);

/// Worker count for table builds; 0 means hardware concurrency.
int worker_threads();
void set_worker_threads(int n);

/// Runs body(begin, end) over contiguous chunks of [0, n) on worker threads.
/// Each index is visited by exactly one call, so writes into per-index slots
/// are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace qpoly::algebra
