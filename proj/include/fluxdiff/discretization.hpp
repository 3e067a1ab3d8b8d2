#pragma once

#include "fluxdiff/field.hpp"
#include "fluxdiff/gauss.hpp"
#include "fluxdiff/geometry.hpp"
#include "fluxdiff/kernels_batched.hpp"
#include "fluxdiff/operators.hpp"
#include "fluxdiff/rhs.hpp"
#include "fluxdiff/surface.hpp"
#include "fluxdiff/volume.hpp"
