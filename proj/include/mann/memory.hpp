#pragma once

// Softmax-addressed working memory attached to one network level.
//
// Slots are the columns of mu (N × n_s). Read and write share the addressing
// weights z = softmax(muᵀ q):
//   M_r = mu z
//   μ̇_{·,j} = z_j (−μ_{·,j} + c_w a + W_out e)

#include "mann/nn.hpp"
#include "mann/numerics.hpp"

namespace mann {

inline constexpr double kDefaultWriteConstant = 0.75;

struct MemoryState {
  Mat mu;  // N × n_s
  double c_w = kDefaultWriteConstant;

  int width() const noexcept { return static_cast<int>(mu.rows()); }
  int slots() const noexcept { return static_cast<int>(mu.cols()); }

  /// Zero-initialised memory. Throws ConfigError for c_w outside [0, 1].
  static MemoryState zeros(int width, int slots, double c_w = kDefaultWriteConstant);
};

struct MemoryRead {
  Vec m_r;  // N
  Vec z;    // n_s
};

MemoryRead read(const MemoryState& mem, const Vec& q);

/// Write law with addressing weights computed from (mem, q).
Mat write_derivative(const MemoryState& mem, const Vec& q, const Vec& a, const Vec& w_out, double e);

/// Write law with precomputed addressing weights z and an explicit write constant.
Mat write_derivative_with(const MemoryState& mem, const Vec& z, const Vec& a, const Vec& w_out,
                          double e, double c_w);

/// The query (and write vector) is the current hidden-layer output.
inline Vec query(const TwoLayerNN& nn, const Vec& x_tilde) { return hidden(nn, x_tilde); }

}  // namespace mann
