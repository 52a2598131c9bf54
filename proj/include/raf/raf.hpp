#pragma once

#include "raf/error.hpp"
#include "raf/fractal.hpp"
#include "raf/io.hpp"
#include "raf/kernel.hpp"
#include "raf/littlewood.hpp"
#include "raf/parallel.hpp"
#include "raf/pointprocess.hpp"
#include "raf/polynomial.hpp"
#include "raf/raster.hpp"
#include "raf/rng.hpp"
#include "raf/sampler.hpp"
#include "raf/zerofinder.hpp"
