#pragma once

#include "digester/core_state.hpp"
#include "digester/energetics.hpp"
#include "digester/engine.hpp"
#include "digester/errors.hpp"
#include "digester/hydraulics.hpp"
#include "digester/model.hpp"
#include "digester/rheology.hpp"
#include "digester/scenario.hpp"
#include "digester/scenario_io.hpp"
#include "digester/smc.hpp"
#include "digester/sweep.hpp"
