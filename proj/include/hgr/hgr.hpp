#pragma once

// Hierarchical grid refactoring: multigrid decomposition of structured
// scientific data into coefficient classes, prefix reconstruction, a
// progressive binary container, and an analytical kernel cost model.

#include "hgr/correction.hpp"
#include "hgr/error.hpp"
#include "hgr/grid_hierarchy.hpp"
#include "hgr/ndarray.hpp"
#include "hgr/parallel.hpp"
#include "hgr/perf_model.hpp"
#include "hgr/refactor.hpp"
#include "hgr/storage.hpp"
#include "hgr/transforms.hpp"
