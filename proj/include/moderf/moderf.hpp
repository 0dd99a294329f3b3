#pragma once

#include "moderf/contraction.hpp"
#include "moderf/errors.hpp"
#include "moderf/function_space.hpp"
#include "moderf/picard_solver.hpp"
#include "moderf/quadrature.hpp"
#include "moderf/random_functions.hpp"
#include "moderf/serialization.hpp"
#include "moderf/shooting_oracle.hpp"
#include "moderf/tau_operator.hpp"
#include "moderf/verification.hpp"
