#include "metapop/markov.hpp"

#include <cmath>
#include <stdexcept>

namespace metapop {

Eigen::VectorXd ctmc_transient(const Eigen::MatrixXd& Q, const Eigen::VectorXd& p0,
                               double t) {
  const Eigen::Index n = Q.rows();
  if (Q.cols() != n || p0.size() != n)
    throw std::invalid_argument("ctmc_transient: dimension mismatch");
  if (t < 0.0) throw std::invalid_argument("ctmc_transient: negative time");
  double uni_rate = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) uni_rate = std::max(uni_rate, -Q(i, i));
  if (uni_rate == 0.0 || t == 0.0) return p0;
  uni_rate *= 1.05;  // strictly dominate the exit rates

  const Eigen::MatrixXd P =
      Eigen::MatrixXd::Identity(n, n) + Q / uni_rate;  // row-stochastic
  const double mean_jumps = uni_rate * t;

  // running Poisson(mean_jumps) weights; accumulate sum_k w_k * p0' P^k
  Eigen::RowVectorXd v = p0.transpose();
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(n);
  double log_w = -mean_jumps;  // log weight of k = 0
  double covered = 0.0;
  const int max_terms =
      static_cast<int>(mean_jumps + 12.0 * std::sqrt(mean_jumps + 1.0) + 64.0);
  for (int k = 0;; ++k) {
    const double w = std::exp(log_w);
    acc += w * v;
    covered += w;
    if (covered >= 1.0 - 1e-13 || k > max_terms) break;
    v = v * P;
    log_w += std::log(mean_jumps) - std::log1p(static_cast<double>(k));
  }
  // assign residual tail mass to the last computed power
  if (covered < 1.0) acc += (1.0 - covered) * v;
  return acc.transpose();
}

}  // namespace metapop
