// Umbrella header.
#pragma once

#include "qfsim/error.hpp"
#include "qfsim/primes.hpp"
#include "qfsim/rational.hpp"
#include "qfsim/ensemble.hpp"
#include "qfsim/special.hpp"
#include "qfsim/spectral.hpp"
#include "qfsim/zeta.hpp"
#include "qfsim/quantum_sieve.hpp"
#include "qfsim/density.hpp"
#include "qfsim/trap.hpp"
#include "qfsim/svg.hpp"
