#pragma once

// Two-armed bandit problems with Levy payoff processes: closed-form optimal
// policies, misprior and information pricing formulas, and a Monte Carlo
// engine that checks the formulas against the simulated process.

#include "levybandit/belief.hpp"
#include "levybandit/bias.hpp"
#include "levybandit/errors.hpp"
#include "levybandit/exponent.hpp"
#include "levybandit/info.hpp"
#include "levybandit/misprior.hpp"
#include "levybandit/problem.hpp"
#include "levybandit/root_solve.hpp"
#include "levybandit/simulate.hpp"
#include "levybandit/valuation.hpp"
