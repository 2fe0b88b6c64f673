#pragma once

#include <nowcast/backtest.hpp>
#include <nowcast/corpus.hpp>
#include <nowcast/demo_lexicons.hpp>
#include <nowcast/distributions.hpp>
#include <nowcast/emolex.hpp>
#include <nowcast/month.hpp>
#include <nowcast/olsreg.hpp>
#include <nowcast/pipeline.hpp>
#include <nowcast/series.hpp>
#include <nowcast/shapiro_wilk.hpp>
#include <nowcast/synth.hpp>
#include <nowcast/tseries.hpp>
