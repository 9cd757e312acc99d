#pragma once

#include "mrc/closed_forms.hpp"
#include "mrc/config.hpp"
#include "mrc/contention.hpp"
#include "mrc/csv.hpp"
#include "mrc/error.hpp"
#include "mrc/round_model.hpp"
#include "mrc/sim/dcf.hpp"
#include "mrc/sim/episodes.hpp"
#include "mrc/sim/report.hpp"
#include "mrc/stopping.hpp"
#include "mrc/throughput.hpp"
#include "mrc/timing.hpp"
