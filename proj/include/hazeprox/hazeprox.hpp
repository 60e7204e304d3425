#pragma once

// Numerical core. File formats and batch commands live under hazeprox/io and
// hazeprox/cli and additionally require libpng.

#include "hazeprox/audit/audit.hpp"
#include "hazeprox/audit/scorers.hpp"
#include "hazeprox/core/error.hpp"
#include "hazeprox/core/image.hpp"
#include "hazeprox/core/metrics.hpp"
#include "hazeprox/core/parallel.hpp"
#include "hazeprox/core/scattering.hpp"
#include "hazeprox/core/summation.hpp"
#include "hazeprox/proximal/engine.hpp"
#include "hazeprox/proximal/updates.hpp"
#include "hazeprox/refinement/refinement.hpp"
#include "hazeprox/synth/filters.hpp"
#include "hazeprox/synth/procedural.hpp"
#include "hazeprox/synth/random.hpp"
#include "hazeprox/synth/synthesis.hpp"
