#pragma once

// Umbrella header.

#include "asymptotics.hpp"
#include "enumeration.hpp"
#include "exact.hpp"
#include "incidence_matrix.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "stats.hpp"
#include "verification.hpp"
