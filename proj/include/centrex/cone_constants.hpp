#pragma once

#include <limits>

namespace centrex {

// Constant chain of the cone construction for one linear map with
// eigenvalues lambda_s < lambda_c < lambda_u:
//
//   1 < (1+beta)^2 < Theta
//   (1+beta) lambda_s < mu1 < lambda2 < lambda_c / (1+beta)
//   (1+beta) lambda_c < mu2 < lambda3 < lambda_u / (1+beta)
//   mu1 < 1 < lambda3
//
// gamma and epsilon stay NaN until conefield::complete_constants fills them.
// lambda1 / mu3 are the exact extreme eigenvalues and purely informational.
struct ConeConstants {
  static constexpr double unset = std::numeric_limits<double>::quiet_NaN();

  double theta = unset;
  double beta = unset;
  double mu1 = unset;
  double lambda2 = unset;
  double mu2 = unset;
  double lambda3 = unset;
  double gamma = unset;
  double epsilon = unset;
  double lambda1 = unset;
  double mu3 = unset;
};

}  // namespace centrex
