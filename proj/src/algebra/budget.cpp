#include "qpoly/algebra/budget.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qpoly/algebra/errors.hpp"
#include "qpoly/algebra/field.hpp"

namespace qpoly::algebra {

namespace {

int env_int(const char* name, int fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    return std::stoi(v);
  } catch (const std::exception&) {
    return fallback;
  }
}

std::atomic<int>& cap_bits() {
  static std::atomic<int> bits{env_int("QPOLY_ENUM_CAP", 24)};
  return bits;
}

std::atomic<std::uint64_t> g_lattice_cap{2'000'000};
std::atomic<int> g_threads{0};

}  // namespace

int enum_cap_bits() { return cap_bits().load(); }
void set_enum_cap_bits(int bits) { cap_bits().store(bits); }

void check_enum_budget(int ell, const Field& field) {
  const double bits = ell * std::log2(static_cast<double>(field.q()));
  if (bits > enum_cap_bits() + 1e-9)
    throw BudgetExceeded("enumeration of F_" + std::to_string(field.q()) + "^" + std::to_string(ell) +
                         " exceeds cap of 2^" + std::to_string(enum_cap_bits()) + " vectors");
}

std::uint64_t lattice_size_cap() { return g_lattice_cap.load(); }
void set_lattice_size_cap(std::uint64_t n) { g_lattice_cap.store(n); }

int worker_threads() {
  int n = g_threads.load();
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void set_worker_threads(int n) { g_threads.store(n < 0 ? 0 : n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_threads()), n);
  if (workers <= 1 || n < 64) {
    if (n) body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&, b, e] {
      try {
        body(b, e);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace qpoly::algebra
