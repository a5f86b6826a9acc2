#pragma once

#include "chiralsim/bessel.hpp"
#include "chiralsim/config.hpp"
#include "chiralsim/dynamics.hpp"
#include "chiralsim/errors.hpp"
#include "chiralsim/fiber_mode.hpp"
#include "chiralsim/geometry.hpp"
#include "chiralsim/io.hpp"
#include "chiralsim/model.hpp"
#include "chiralsim/pipeline.hpp"
#include "chiralsim/quadrature.hpp"
#include "chiralsim/rng.hpp"
#include "chiralsim/spectral.hpp"
#include "chiralsim/stats.hpp"
#include "chiralsim/sweep.hpp"
