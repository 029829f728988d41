#pragma once

#include "errors.hpp"
#include "estimator_general.hpp"
#include "estimator_samelen.hpp"
#include "generators.hpp"
#include "hashing.hpp"
#include "interval.hpp"
#include "oracle.hpp"
#include "selector_general.hpp"
#include "selector_samelen.hpp"
#include "stream_io.hpp"
#include "trials.hpp"
