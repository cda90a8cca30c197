#pragma once

// Umbrella header.

#include "mlf/bench.hpp"
#include "mlf/certificate.hpp"
#include "mlf/config.hpp"
#include "mlf/duality.hpp"
#include "mlf/fixed_point.hpp"
#include "mlf/inclusion.hpp"
#include "mlf/lp.hpp"
#include "mlf/lyapunov_check.hpp"
#include "mlf/numerics.hpp"
#include "mlf/polygon2d.hpp"
#include "mlf/sets.hpp"
