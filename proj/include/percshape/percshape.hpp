#pragma once

#include "bits.hpp"
#include "cross.hpp"
#include "exact_law.hpp"
#include "experiments.hpp"
#include "geodesics.hpp"
#include "io.hpp"
#include "lattice.hpp"
#include "lpp.hpp"
#include "percolation.hpp"
#include "random.hpp"
#include "stats.hpp"
#include "tasep.hpp"
