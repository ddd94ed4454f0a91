#pragma once

// Umbrella header: per-qubit noise propagation through Walsh-basis
// expectation values and heterogeneous surface-code distance allocation.

#include "hiqec/errors.hpp"
#include "hiqec/io.hpp"
#include "hiqec/noise.hpp"
#include "hiqec/observables.hpp"
#include "hiqec/qec.hpp"
#include "hiqec/states.hpp"
#include "hiqec/walsh.hpp"
