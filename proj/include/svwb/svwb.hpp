#pragma once

// Umbrella header for the spatially varying white balancing library.

#include "svwb/balance.hpp"
#include "svwb/color.hpp"
#include "svwb/error.hpp"
#include "svwb/estimate.hpp"
#include "svwb/image.hpp"
#include "svwb/imageio.hpp"
#include "svwb/jsonio.hpp"
#include "svwb/linalg.hpp"
#include "svwb/metrics.hpp"
#include "svwb/srgb.hpp"
#include "svwb/synth.hpp"
