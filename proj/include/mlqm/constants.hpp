#pragma once

#include "mlqm/errors.hpp"

namespace mlqm {

// Natural units throughout: hbar = c = 1, energies and momenta in GeV,
// lengths in GeV^-1. The Planck mass sets the deformation scale.
struct PhysicalConstants {
  double m_p_GeV = 1.220890e19;
  double hbar = 1.0;
  double c = 1.0;

  void validate() const {
    if (!(m_p_GeV > 0.0)) throw domain_error("PhysicalConstants: m_p_GeV must be positive");
    if (hbar != 1.0 || c != 1.0) throw domain_error("PhysicalConstants: natural units (hbar = c = 1) required");
  }
};

}  // namespace mlqm
