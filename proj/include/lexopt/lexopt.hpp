#pragma once

#include "lexopt/alpha_search.hpp"
#include "lexopt/cobb_douglas.hpp"
#include "lexopt/compliance.hpp"
#include "lexopt/core_model.hpp"
#include "lexopt/cost_schedule.hpp"
#include "lexopt/errors.hpp"
#include "lexopt/hessian.hpp"
#include "lexopt/sim.hpp"
