// liquid.hpp - everything.
#pragma once

#include "liquid/circulation.hpp"
#include "liquid/exact.hpp"
#include "liquid/generators.hpp"
#include "liquid/harness.hpp"
#include "liquid/instance_io.hpp"
#include "liquid/methods.hpp"
#include "liquid/milp.hpp"
#include "liquid/model.hpp"
#include "liquid/paths.hpp"
#include "liquid/probability.hpp"
#include "liquid/random.hpp"
#include "liquid/reduction.hpp"
#include "liquid/strategies.hpp"
