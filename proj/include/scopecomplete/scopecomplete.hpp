#pragma once

// Umbrella header.

#include "scopecomplete/ascii.hpp"
#include "scopecomplete/bench.hpp"
#include "scopecomplete/corpus.hpp"
#include "scopecomplete/corpus_io.hpp"
#include "scopecomplete/engine.hpp"
#include "scopecomplete/fetcher.hpp"
#include "scopecomplete/index.hpp"
#include "scopecomplete/metrics.hpp"
#include "scopecomplete/report_io.hpp"
#include "scopecomplete/synth.hpp"
