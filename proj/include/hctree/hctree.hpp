#pragma once

#include "hctree/activity.hpp"
#include "hctree/bg_field.hpp"
#include "hctree/errors.hpp"
#include "hctree/gibbs.hpp"
#include "hctree/path_codes.hpp"
#include "hctree/rng.hpp"
#include "hctree/scalar_dynamics.hpp"
