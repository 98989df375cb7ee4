#pragma once

// Exact-arithmetic workbench for Hamiltonian circle actions with isolated
// fixed points: localization integrals, canonical classes, and unimodality
// witnesses, all over the rationals.

#include "equiloc/class_expr.hpp"
#include "equiloc/cli.hpp"
#include "equiloc/cohomology.hpp"
#include "equiloc/fixed_points.hpp"
#include "equiloc/io.hpp"
#include "equiloc/linalg.hpp"
#include "equiloc/poly.hpp"
#include "equiloc/polytope.hpp"
#include "equiloc/rational.hpp"
#include "equiloc/toric.hpp"
#include "equiloc/verifier.hpp"
