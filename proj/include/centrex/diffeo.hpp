#pragma once

// f_{k,r} = f_k o h_{k,r}: the linear automorphism composed with the
// localized bump. Without a bump it is f_k itself.

#include <optional>

#include "centrex/perturbation.hpp"
#include "centrex/spectral.hpp"

namespace centrex {

class PerturbedDiffeo {
 public:
  static PerturbedDiffeo unperturbed(SpectralData spectral);
  static PerturbedDiffeo perturbed(LocalizedBump localized);

  const SpectralData& spectral() const { return spectral_; }
  const Mat3& matrix() const { return a_; }
  const Mat3& matrix_inverse() const { return a_inv_; }
  bool is_unperturbed() const { return !localized_.has_value(); }
  // Throws std::logic_error on the unperturbed map.
  const LocalizedBump& localized() const;

 private:
  explicit PerturbedDiffeo(SpectralData spectral);

  SpectralData spectral_;
  Mat3 a_;
  Mat3 a_inv_;
  std::optional<LocalizedBump> localized_;
};

// Applies h_{k,r} then A_k to the lift; the result's lift is the image of
// the input's lift, its coordinates are reduced mod 1.
TorusPoint step(const PerturbedDiffeo& f, const TorusPoint& w);
// A_k * Dh_{k,r}(w)
Mat3 dstep(const PerturbedDiffeo& f, const TorusPoint& w);
// h_{k,r}^-1 o A_k^-1
TorusPoint inverse_step(const PerturbedDiffeo& f, const TorusPoint& w);

}  // namespace centrex
