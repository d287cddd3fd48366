#ifndef SEMIREL_HPP
#define SEMIREL_HPP

#include "semirel/checkpoint.hpp"
#include "semirel/classical.hpp"
#include "semirel/config.hpp"
#include "semirel/ctmc.hpp"
#include "semirel/free_electron.hpp"
#include "semirel/gauge.hpp"
#include "semirel/pulse.hpp"
#include "semirel/runner.hpp"
#include "semirel/tdse.hpp"
#include "semirel/tdse_sweep.hpp"
#include "semirel/trajectory.hpp"

#endif  // SEMIREL_HPP
