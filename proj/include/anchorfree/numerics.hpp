#pragma once

// Numeric kernels: square-root factor, LP, determinants, assignment and
// simplex-constrained least squares.
#include "anchorfree/assignment.hpp"
#include "anchorfree/dense.hpp"
#include "anchorfree/eigensolver.hpp"
#include "anchorfree/linprog.hpp"
#include "anchorfree/simplex_lsq.hpp"
