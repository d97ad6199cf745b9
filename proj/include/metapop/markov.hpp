#pragma once

#include <Eigen/Dense>

namespace metapop {

// Transient distribution of a finite CTMC: returns p0' * exp(Q t) computed by
// the uniformization series, truncated when the Poisson tail drops below
// 1e-13. Q is the generator (rows sum to zero, off-diagonals >= 0); p0 is a
// probability vector.
Eigen::VectorXd ctmc_transient(const Eigen::MatrixXd& Q, const Eigen::VectorXd& p0,
                               double t);

}  // namespace metapop
