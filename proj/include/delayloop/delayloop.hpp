#pragma once

#include "delayloop/core.hpp"
#include "delayloop/indices.hpp"
#include "delayloop/mos_solver.hpp"
#include "delayloop/oracle.hpp"
#include "delayloop/parallel.hpp"
#include "delayloop/proposed.hpp"
#include "delayloop/report.hpp"
#include "delayloop/roots.hpp"
#include "delayloop/runtime.hpp"
#include "delayloop/sp_analytic.hpp"
#include "delayloop/stability.hpp"
#include "delayloop/tuning.hpp"
