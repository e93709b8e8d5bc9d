#pragma once

#include "mlqm/bounds.hpp"
#include "mlqm/chsh.hpp"
#include "mlqm/constants.hpp"
#include "mlqm/correction.hpp"
#include "mlqm/deformation.hpp"
#include "mlqm/distribution.hpp"
#include "mlqm/errors.hpp"
#include "mlqm/hilbert.hpp"
#include "mlqm/interferometer.hpp"
