#pragma once

#include "cisdag/dag.hpp"
#include "cisdag/dataset.hpp"
#include "cisdag/errors.hpp"
#include "cisdag/factor.hpp"
#include "cisdag/io.hpp"
#include "cisdag/lstsq.hpp"
#include "cisdag/matrix.hpp"
#include "cisdag/mle.hpp"
#include "cisdag/model.hpp"
#include "cisdag/nnls.hpp"
#include "cisdag/ordering.hpp"
#include "cisdag/positivity.hpp"
#include "cisdag/recovery.hpp"
#include "cisdag/simulate.hpp"
