#pragma once

#include "berry_esseen.hpp"
#include "charfn.hpp"
#include "dist_core.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "marcinkiewicz_verify.hpp"
#include "poisson_square.hpp"
#include "quadrature.hpp"
#include "zero_strip.hpp"
