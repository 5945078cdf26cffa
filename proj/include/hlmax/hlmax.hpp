#pragma once

#include "hlmax/rational.hpp"
#include "hlmax/core.hpp"
#include "hlmax/json_io.hpp"
#include "hlmax/parallel.hpp"
#include "hlmax/discrete_op.hpp"
#include "hlmax/variation.hpp"
#include "hlmax/continuous_op.hpp"
#include "hlmax/verify.hpp"
#include "hlmax/search.hpp"
