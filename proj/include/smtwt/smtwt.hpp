#pragma once

#include "smtwt/analysis.hpp"
#include "smtwt/deviation.hpp"
#include "smtwt/error.hpp"
#include "smtwt/exact.hpp"
#include "smtwt/instance_io.hpp"
#include "smtwt/model.hpp"
#include "smtwt/neighborhood.hpp"
#include "smtwt/random.hpp"
#include "smtwt/report.hpp"
#include "smtwt/search.hpp"
