#pragma once

// Umbrella header: Fitzpatrick functions of sigma-monotone (premonotone)
// operators on R^n, with sigma-monotonicity certification, resolvent
// solving and the Hilbert-space checks.

#include "fitz/errors.hpp"
#include "fitz/expression.hpp"
#include "fitz/fitzpatrick.hpp"
#include "fitz/grid_export.hpp"
#include "fitz/hilbert.hpp"
#include "fitz/json_io.hpp"
#include "fitz/operators.hpp"
#include "fitz/report.hpp"
#include "fitz/sigma.hpp"
#include "fitz/sigma_analysis.hpp"
#include "fitz/types.hpp"
#include "fitz/version.hpp"
