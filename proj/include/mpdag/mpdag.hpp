#pragma once

#include "mpdag/error.hpp"
#include "mpdag/node_set.hpp"
#include "mpdag/graph.hpp"
#include "mpdag/graph_io.hpp"
#include "mpdag/paths.hpp"
#include "mpdag/ancestry.hpp"
#include "mpdag/dsep.hpp"
#include "mpdag/meek.hpp"
#include "mpdag/ident.hpp"
#include "mpdag/idgraphs.hpp"
#include "mpdag/linear_scm.hpp"
#include "mpdag/simulation.hpp"
