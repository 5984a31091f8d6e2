#pragma once

#include "pcurve/analysis.hpp"
#include "pcurve/arc_curve.hpp"
#include "pcurve/crossings.hpp"
#include "pcurve/curve_spec.hpp"
#include "pcurve/cylinder.hpp"
#include "pcurve/error.hpp"
#include "pcurve/generators.hpp"
#include "pcurve/loops.hpp"
#include "pcurve/schur.hpp"
#include "pcurve/tolerances.hpp"
#include "pcurve/verifiers.hpp"
