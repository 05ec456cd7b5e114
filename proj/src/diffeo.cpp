#include "centrex/diffeo.hpp"

#include <stdexcept>

namespace centrex {

PerturbedDiffeo::PerturbedDiffeo(SpectralData spectral)
    : spectral_(std::move(spectral)),
      a_(family_matrix(spectral_.k)),
      a_inv_(inverse_matrix(spectral_.k)) {}

PerturbedDiffeo PerturbedDiffeo::unperturbed(SpectralData spectral) {
  return PerturbedDiffeo(std::move(spectral));
}

PerturbedDiffeo PerturbedDiffeo::perturbed(LocalizedBump localized) {
  PerturbedDiffeo f(localized.chart().spectral());
  f.localized_ = std::move(localized);
  return f;
}

const LocalizedBump& PerturbedDiffeo::localized() const {
  if (!localized_) throw std::logic_error("PerturbedDiffeo: no bump attached");
  return *localized_;
}

TorusPoint step(const PerturbedDiffeo& f, const TorusPoint& w) {
  const TorusPoint moved =
      f.is_unperturbed() ? w : apply_localized(f.localized(), w);
  return TorusPoint::from_lift(f.matrix() * moved.lift());
}

Mat3 dstep(const PerturbedDiffeo& f, const TorusPoint& w) {
  if (f.is_unperturbed()) return f.matrix();
  return f.matrix() * jac_localized(f.localized(), w);
}

TorusPoint inverse_step(const PerturbedDiffeo& f, const TorusPoint& w) {
  const TorusPoint back = TorusPoint::from_lift(f.matrix_inverse() * w.lift());
  return f.is_unperturbed() ? back
                            : apply_localized_inverse(f.localized(), back);
}

}  // namespace centrex
