#pragma once

// Population-level stochastic linear regression toolkit: exact moments of
// polynomial transforms of independent sources, orthogonal projection,
// Gram-Schmidt orthogonalization, model validation and classification, a
// catalog of distinguishing counterexamples, and seeded Monte Carlo
// consistency experiments.

#include "slr/counterexamples.hpp"
#include "slr/errors.hpp"
#include "slr/linalg.hpp"
#include "slr/model_spec.hpp"
#include "slr/moments.hpp"
#include "slr/orthogonalization.hpp"
#include "slr/polynomial.hpp"
#include "slr/projection.hpp"
#include "slr/regression_model.hpp"
#include "slr/rng.hpp"
#include "slr/simulation.hpp"
#include "slr/source_distribution.hpp"
