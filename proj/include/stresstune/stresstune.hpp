#pragma once

#include "stresstune/error.hpp"
#include "stresstune/parallel.hpp"
#include "stresstune/core.hpp"
#include "stresstune/graph.hpp"
#include "stresstune/embed.hpp"
#include "stresstune/align.hpp"
#include "stresstune/stitch.hpp"
#include "stresstune/rigidity.hpp"
#include "stresstune/tune.hpp"
#include "stresstune/data.hpp"
#include "stresstune/isomap_local.hpp"
#include "stresstune/io.hpp"
#include "stresstune/plot.hpp"
