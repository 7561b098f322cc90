#pragma once

// Umbrella header for the causat core library.

#include "causat/ast.hpp"
#include "causat/classify.hpp"
#include "causat/constraints.hpp"
#include "causat/errors.hpp"
#include "causat/eval.hpp"
#include "causat/lp.hpp"
#include "causat/model.hpp"
#include "causat/model_io.hpp"
#include "causat/parser.hpp"
#include "causat/poly_feasibility.hpp"
#include "causat/polynomial.hpp"
#include "causat/printer.hpp"
#include "causat/rational.hpp"
#include "causat/smtlib.hpp"
#include "causat/solve.hpp"
#include "causat/structures.hpp"
#include "causat/transform.hpp"
