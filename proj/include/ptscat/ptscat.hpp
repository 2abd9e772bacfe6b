#pragma once
/// Umbrella header for the whole library.

#include "ptscat/errors.hpp"
#include "ptscat/mat2.hpp"
#include "ptscat/potential.hpp"
#include "ptscat/propagate.hpp"
#include "ptscat/coeffs.hpp"
#include "ptscat/imageset.hpp"
#include "ptscat/smatrix.hpp"
#include "ptscat/verify.hpp"
#include "ptscat/inverse.hpp"
#include "ptscat/io.hpp"
