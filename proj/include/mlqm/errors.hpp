#pragma once

#include <stdexcept>

namespace mlqm {

// Precondition or validity-domain violation (u outside [0, u_max], bad beta, ...).
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// The commutativity margin reached zero: the Jacobi partner g diverges there.
struct singularity_error : domain_error {
  using domain_error::domain_error;
};

// Operator/state arguments live on different Hilbert spaces.
struct space_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace mlqm
