#pragma once

#include "planar/analytic.hpp"
#include "planar/expfam.hpp"
#include "planar/profile.hpp"
#include "planar/radius.hpp"
#include "planar/rebase.hpp"
#include "planar/scalar.hpp"
#include "planar/series.hpp"
#include "planar/series_json.hpp"
#include "planar/special.hpp"
#include "planar/tree.hpp"
