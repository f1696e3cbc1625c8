#pragma once

#include "qalv/common.hpp"
#include "qalv/rng.hpp"
#include "qalv/parallel.hpp"
#include "qalv/quantum_game.hpp"
#include "qalv/alv_dynamics.hpp"
#include "qalv/meanfield_phase.hpp"
#include "qalv/master_oracle.hpp"
#include "qalv/network.hpp"
#include "qalv/agent_sim.hpp"
#include "qalv/csv.hpp"
