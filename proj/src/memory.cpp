#include "mann/memory.hpp"

#include <string>

namespace mann {

MemoryState MemoryState::zeros(int width, int slots, double c_w) {
  if (width < 1 || slots < 1) throw DimensionError("MemoryState: dimensions must be positive");
  if (!(c_w >= 0.0 && c_w <= 1.0)) throw ConfigError("MemoryState: c_w must lie in [0, 1]");
  return {Mat::Zero(width, slots), c_w};
}

MemoryRead read(const MemoryState& mem, const Vec& q) {
  if (q.size() != mem.width()) {
    throw DimensionError("memory read: query length " + std::to_string(q.size()) +
                         " != slot width " + std::to_string(mem.width()));
  }
  MemoryRead out;
  out.z = softmax(mem.mu.transpose() * q);
  out.m_r = mem.mu * out.z;
  return out;
}

Mat write_derivative_with(const MemoryState& mem, const Vec& z, const Vec& a, const Vec& w_out,
                          double e, double c_w) {
  const auto n = mem.width();
  if (a.size() != n || w_out.size() != n) {
    throw DimensionError("memory write: write vector and output weights must have length N");
  }
  if (z.size() != mem.slots()) throw DimensionError("memory write: addressing weights != n_s");
  const Vec target = c_w * a + e * w_out;
  Mat d(n, mem.slots());
  for (Eigen::Index j = 0; j < mem.slots(); ++j) d.col(j) = z[j] * (target - mem.mu.col(j));
  return d;
}

Mat write_derivative(const MemoryState& mem, const Vec& q, const Vec& a, const Vec& w_out, double e) {
  const MemoryRead r = read(mem, q);
  return write_derivative_with(mem, r.z, a, w_out, e, mem.c_w);
}

}  // namespace mann
