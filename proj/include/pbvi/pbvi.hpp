#pragma once

#include "pbvi/backup.hpp"
#include "pbvi/belief.hpp"
#include "pbvi/cassandra.hpp"
#include "pbvi/dp_update.hpp"
#include "pbvi/errors.hpp"
#include "pbvi/geometry.hpp"
#include "pbvi/lp.hpp"
#include "pbvi/model.hpp"
#include "pbvi/policy_io.hpp"
#include "pbvi/simulate.hpp"
#include "pbvi/solver.hpp"
