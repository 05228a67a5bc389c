#pragma once

#include "plcircle/circle.hpp"
#include "plcircle/pl_homeo.hpp"
#include "plcircle/cocycle.hpp"
#include "plcircle/rotation_number.hpp"
#include "plcircle/smoothing.hpp"
#include "plcircle/cantor_bendixson.hpp"
