#include "mann/nn.hpp"

#include <string>

namespace mann {

TwoLayerNN TwoLayerNN::zeros(int input_dim, int hidden_width) {
  if (input_dim < 1 || hidden_width < 1) throw DimensionError("TwoLayerNN: dimensions must be positive");
  return {Mat::Zero(input_dim + 1, hidden_width), Vec::Zero(hidden_width + 1)};
}

TwoLayerNN TwoLayerNN::seeded(int input_dim, int hidden_width, std::mt19937_64& rng, double range) {
  TwoLayerNN nn = zeros(input_dim, hidden_width);
  std::uniform_real_distribution<double> dist(-range, range);
  // Column-major fill order keeps the draw sequence tied to the flat layout.
  for (Eigen::Index c = 0; c < nn.v_aug.cols(); ++c) {
    for (Eigen::Index r = 0; r < nn.v_aug.rows(); ++r) nn.v_aug(r, c) = dist(rng);
  }
  return nn;
}

Vec augment_input(const Vec& x_tilde) {
  Vec x_e(x_tilde.size() + 1);
  x_e << x_tilde, 1.0;
  return x_e;
}

namespace {

void check_input(const TwoLayerNN& nn, const Vec& x_tilde) {
  if (x_tilde.size() != nn.input_dim()) {
    throw DimensionError("nn: input length " + std::to_string(x_tilde.size()) + " != " +
                         std::to_string(nn.input_dim()));
  }
}

}  // namespace

Vec pre_activation(const TwoLayerNN& nn, const Vec& x_tilde) {
  check_input(nn, x_tilde);
  return nn.v_aug.transpose() * augment_input(x_tilde);
}

Vec hidden(const TwoLayerNN& nn, const Vec& x_tilde) {
  return pre_activation(nn, x_tilde).unaryExpr([](double z) { return sigmoid(z); });
}

Vec sigma_hat(const TwoLayerNN& nn, const Vec& x_tilde) {
  const Vec q = hidden(nn, x_tilde);
  Vec out(q.size() + 1);
  out << q, 1.0;
  return out;
}

Mat sigma_prime(const TwoLayerNN& nn, const Vec& x_tilde) {
  const Vec z = pre_activation(nn, x_tilde);
  const auto n = z.size();
  Mat jac = Mat::Zero(n + 1, n);
  for (Eigen::Index j = 0; j < n; ++j) jac(j, j) = sigmoid_deriv(z[j]);
  return jac;
}

double approximate_h(const TwoLayerNN& nn, const Vec& x_tilde, const Vec& m_r) {
  if (m_r.size() != nn.hidden_width()) throw DimensionError("approximate_h: M_r length != N");
  const Vec s = sigma_hat(nn, x_tilde);
  const auto n = nn.hidden_width();
  return nn.w_aug.head(n).dot(s.head(n) + m_r) + nn.w_aug[n] * s[n];
}

HiddenLayerEval evaluate_hidden(const TwoLayerNN& nn, const Vec& x_tilde) {
  check_input(nn, x_tilde);
  HiddenLayerEval ev;
  ev.x_e = augment_input(x_tilde);
  ev.z = nn.v_aug.transpose() * ev.x_e;
  const auto n = ev.z.size();
  ev.q = ev.z.unaryExpr([](double z) { return sigmoid(z); });
  ev.sigma_hat.resize(n + 1);
  ev.sigma_hat << ev.q, 1.0;
  ev.sigma_prime = Mat::Zero(n + 1, n);
  for (Eigen::Index j = 0; j < n; ++j) ev.sigma_prime(j, j) = sigmoid_deriv(ev.z[j]);
  return ev;
}

int level_input_dim(int level, int hidden_width) {
  if (level < 1) throw DimensionError("level_input_dim: levels are 1-based");
  int d = level + (level + 1);
  for (int i = 1; i < level; ++i) {
    const int d_i = level_input_dim(i, hidden_width);
    d += (d_i + 1) * hidden_width + hidden_width + 1;
  }
  return d;
}

void append_flat_weights(const TwoLayerNN& nn, std::vector<double>& out) {
  // Eigen default storage is column-major.
  out.insert(out.end(), nn.v_aug.data(), nn.v_aug.data() + nn.v_aug.size());
  out.insert(out.end(), nn.w_aug.data(), nn.w_aug.data() + nn.w_aug.size());
}

Vec assemble_input(int level, const Vec& x, const CommandSignal& cmd, double t,
                   std::span<const TwoLayerNN> prior) {
  if (level < 1 || level > x.size()) throw DimensionError("assemble_input: level out of range");
  if (static_cast<int>(prior.size()) < level - 1) {
    throw DimensionError("assemble_input: missing prior-level weights");
  }
  std::vector<double> buf;
  buf.reserve(64);
  buf.insert(buf.end(), x.data(), x.data() + level);
  for (int k = 0; k <= level; ++k) buf.push_back(cmd.derivative(k, t));
  for (int i = 0; i < level - 1; ++i) append_flat_weights(prior[i], buf);
  return Eigen::Map<const Vec>(buf.data(), static_cast<Eigen::Index>(buf.size()));
}

}  // namespace mann
