#pragma once

#include "errors.hpp"
#include "divisor.hpp"
#include "specfun.hpp"
#include "wilson_core.hpp"
#include "funcmodel.hpp"
#include "numerics.hpp"
#include "nevanlinna.hpp"
#include "wilson_counting.hpp"
#include "wilson_polynomials.hpp"
#include "wilson_series.hpp"
#include "equations.hpp"
#include "io.hpp"
