#pragma once

// Umbrella header.

#include "certfile.hpp"
#include "certify.hpp"
#include "cone.hpp"
#include "dini.hpp"
#include "duality.hpp"
#include "expr.hpp"
#include "grid.hpp"
#include "linprog.hpp"
#include "parse.hpp"
#include "piecewise.hpp"
#include "print.hpp"
#include "problem.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "single_level.hpp"
#include "tangent.hpp"
#include "vec.hpp"
