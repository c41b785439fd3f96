#pragma once

// Umbrella header for the fairshield library: probabilistic runtime shields
// that keep the running average of a binary decision stream inside a
// short-term interval with high probability and drive it to a long-term
// target, plus exact violation computation, analytic bounds, and synthesis of
// the least-invasive shield.

#include "fairshield/analysis.hpp"
#include "fairshield/csv.hpp"
#include "fairshield/energy.hpp"
#include "fairshield/energy_json.hpp"
#include "fairshield/env.hpp"
#include "fairshield/errors.hpp"
#include "fairshield/exactdp.hpp"
#include "fairshield/fairness.hpp"
#include "fairshield/parallel.hpp"
#include "fairshield/rng.hpp"
#include "fairshield/shield.hpp"
#include "fairshield/simkit.hpp"
#include "fairshield/synthesis.hpp"
