#pragma once

// Umbrella header: exact switching-module bases, dependency decompositions
// and line-sum consistency decisions on finite lattice regions.

#include "linesum/consistency.hpp"
#include "linesum/dependency.hpp"
#include "linesum/geometry.hpp"
#include "linesum/laurent.hpp"
#include "linesum/linalg.hpp"
#include "linesum/numeric.hpp"
#include "linesum/prng.hpp"
#include "linesum/ring.hpp"
#include "linesum/tomography.hpp"
