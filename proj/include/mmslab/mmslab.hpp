#pragma once

#include "mmslab/errors.hpp"
#include "mmslab/metric_space.hpp"
#include "mmslab/measure.hpp"
#include "mmslab/averaging_operator.hpp"
#include "mmslab/search.hpp"
#include "mmslab/nets_covers.hpp"
#include "mmslab/constructions.hpp"
#include "mmslab/random_instances.hpp"
#include "mmslab/io.hpp"
#include "mmslab/verify.hpp"
#include "mmslab/version.hpp"
