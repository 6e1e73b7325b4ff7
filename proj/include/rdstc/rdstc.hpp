#pragma once

// Randomized distributed space-time coding for two-hop AF cooperative MIMO:
// complex linear algebra kernel, block-fading channel generation, Alamouti
// encoding and its equivalent vectorized channel, MMSE reception, adaptive
// randomization (closed form and stochastic gradient), pairwise-error-
// probability bounds, and a reproducible Monte Carlo BER harness.

#include "rdstc/channel.hpp"
#include "rdstc/config.hpp"
#include "rdstc/errors.hpp"
#include "rdstc/linalg.hpp"
#include "rdstc/matrix.hpp"
#include "rdstc/modulation.hpp"
#include "rdstc/pep.hpp"
#include "rdstc/randomized.hpp"
#include "rdstc/receiver.hpp"
#include "rdstc/rng.hpp"
#include "rdstc/sim.hpp"
#include "rdstc/stc.hpp"
