#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracrom {

// Error taxonomy. The CLI maps these onto exit codes: ConfigError -> 2,
// NumericError -> 3, IoError -> 4. Library code throws, never exits.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
// Shape mismatches are programming or data errors; numerically fatal.
struct DimensionError : NumericError {
  using NumericError::NumericError;
};

// Index type for sparse storage. Grids top out at 257^2 nodes (~3e5 dofs,
// ~2e6 nonzeros), far below the 32-bit limit; int also matches Eigen's
// default sparse StorageIndex so CSR buffers can be mapped without copies.
using Index = int;

class WallTimer {
 public:
  WallTimer() : start_(clock::now()) {}
  void reset() { start_ = clock::now(); }
  double seconds() const {
    return std::chrono::duration<double>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_;
};

// Collects non-fatal diagnostics (out-of-box parameters, non-converged
// training samples, ...) so commands can surface them in run reports.
struct RunLog {
  std::vector<std::string> warnings;
  void warn(std::string msg) { warnings.push_back(std::move(msg)); }
};

// Worker-thread cap shared by all modules. Default 1 (the determinism
// baseline). Every parallel loop in this codebase assigns each task its own
// output slot, so results are identical at any cap; the cap only bounds
// resource use.
int worker_threads();
void set_worker_threads(int n);

// Runs fn(i) for i in [0, n). Sequential when the cap is 1 or n is small;
// otherwise splits across threads. fn must only write state owned by task i.
void parallel_for(Index n, const std::function<void(Index)>& fn);

std::string format_double(double v);  // shortest round-trip decimal form

// CRC-32 (IEEE, reflected, poly 0xEDB88320). Chainable: start from 0, feed
// buffers in order; crc32_update(crc32_update(0, a), b) == crc of a||b.
std::uint32_t crc32_update(std::uint32_t crc, const void* data, std::size_t len);

}  // namespace fracrom
