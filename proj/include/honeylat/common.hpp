#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace honeylat {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using VecX = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;
using MatX = Eigen::MatrixXd;
using MatXc = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Complex representation of a 2-vector, z = v_x + i v_y.
inline Complex as_complex(const Vec2& v) { return Complex(v.x(), v.y()); }

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thread count: HONEYLAT_THREADS overrides hardware concurrency.
inline int thread_count() {
  if (const char* env = std::getenv("HONEYLAT_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Static-partition parallel loop over [0, n). Results must be written to
/// preallocated slots; the partition is deterministic.
inline void parallel_for(int n, const std::function<void(int)>& body, int nthreads = 0) {
  if (nthreads <= 0) nthreads = thread_count();
  nthreads = std::min(nthreads, n);
  if (nthreads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([=, &body] {
      for (int i = t; i < n; i += nthreads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace honeylat
