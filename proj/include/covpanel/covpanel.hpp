#pragma once

// Umbrella header for the coverage-aware panel construction toolkit.

#include "covpanel/arima.hpp"
#include "covpanel/construction.hpp"
#include "covpanel/core.hpp"
#include "covpanel/date.hpp"
#include "covpanel/distortion.hpp"
#include "covpanel/errors.hpp"
#include "covpanel/garch.hpp"
#include "covpanel/ingest.hpp"
#include "covpanel/io.hpp"
#include "covpanel/nelder_mead.hpp"
#include "covpanel/rng.hpp"
#include "covpanel/serialize.hpp"
#include "covpanel/stats.hpp"
#include "covpanel/synthetic.hpp"
