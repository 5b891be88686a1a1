#pragma once

// Umbrella header.

#include "dlamps/errors.hpp"
#include "dlamps/field_io.hpp"
#include "dlamps/fields.hpp"
#include "dlamps/geometry.hpp"
#include "dlamps/optics.hpp"
#include "dlamps/png_io.hpp"
#include "dlamps/psycho.hpp"
#include "dlamps/raster.hpp"
#include "dlamps/rng.hpp"
#include "dlamps/runner.hpp"
#include "dlamps/synth.hpp"
#include "dlamps/version.hpp"
#include "dlamps/warp.hpp"
