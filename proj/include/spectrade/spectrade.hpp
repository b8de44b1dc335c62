#pragma once

// Umbrella header for the whole trading stack: market model, interference
// grouping, group bidding, clearing, evaluation, robustness probes, scenario
// generation and experiment sweeps.

#include "spectrade/rational.hpp"
#include "spectrade/rng.hpp"
#include "spectrade/market.hpp"
#include "spectrade/interference.hpp"
#include "spectrade/vbg.hpp"
#include "spectrade/clearing.hpp"
#include "spectrade/evaluation.hpp"
#include "spectrade/robustness.hpp"
#include "spectrade/generator.hpp"
#include "spectrade/parallel.hpp"
#include "spectrade/sweep.hpp"
#include "spectrade/reports.hpp"
