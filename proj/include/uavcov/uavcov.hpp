#pragma once

// Umbrella header for the library (the cli/ headers are separate; they pull
// in the vendored JSON parser).

#include "uavcov/analytic.hpp"
#include "uavcov/error.hpp"
#include "uavcov/model.hpp"
#include "uavcov/montecarlo.hpp"
#include "uavcov/numerics/jet.hpp"
#include "uavcov/numerics/laplace.hpp"
#include "uavcov/numerics/quadrature.hpp"
#include "uavcov/numerics/special.hpp"
#include "uavcov/parallel.hpp"
#include "uavcov/random.hpp"
#include "uavcov/stats.hpp"
