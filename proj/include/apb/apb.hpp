#pragma once

#include "apb/core.hpp"
#include "apb/matching.hpp"
#include "apb/preference.hpp"
#include "apb/ranking.hpp"
#include "apb/report.hpp"
#include "apb/rounds.hpp"
#include "apb/scenario.hpp"
#include "apb/simulate.hpp"
