#pragma once

// Umbrella header: exact parametric solutions of Chiellini-integrable
// Lienard equations, with independent Runge-Kutta cross-validation.

#include "lienard/asymptotics.hpp"
#include "lienard/csv.hpp"
#include "lienard/errors.hpp"
#include "lienard/function_spec.hpp"
#include "lienard/integrability.hpp"
#include "lienard/interpolation.hpp"
#include "lienard/kernel.hpp"
#include "lienard/polynomial.hpp"
#include "lienard/quadrature.hpp"
#include "lienard/rational.hpp"
#include "lienard/roots.hpp"
#include "lienard/solver.hpp"
#include "lienard/svg.hpp"
#include "lienard/systems.hpp"
#include "lienard/trajectory.hpp"
#include "lienard/verify.hpp"
