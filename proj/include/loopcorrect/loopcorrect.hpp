#pragma once

// Everything in one include.

#include "loopcorrect/beliefs.hpp"
#include "loopcorrect/errors.hpp"
#include "loopcorrect/exact.hpp"
#include "loopcorrect/generate.hpp"
#include "loopcorrect/graph.hpp"
#include "loopcorrect/graph_io.hpp"
#include "loopcorrect/graphpoly.hpp"
#include "loopcorrect/lbp.hpp"
#include "loopcorrect/loopseries.hpp"
#include "loopcorrect/model.hpp"
#include "loopcorrect/model_io.hpp"
#include "loopcorrect/poly.hpp"
