#pragma once

#include "inter_mdm/agent.hpp"
#include "inter_mdm/dataset.hpp"
#include "inter_mdm/errors.hpp"
#include "inter_mdm/experiment.hpp"
#include "inter_mdm/metrics.hpp"
#include "inter_mdm/naming_game.hpp"
#include "inter_mdm/random.hpp"
#include "inter_mdm/types.hpp"
