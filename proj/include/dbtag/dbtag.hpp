#pragma once

// Umbrella header for the dbtag library.

#include "dbtag/aligner.hpp"
#include "dbtag/calibrate.hpp"
#include "dbtag/core.hpp"
#include "dbtag/log.hpp"
#include "dbtag/metrics.hpp"
#include "dbtag/pipeline.hpp"
#include "dbtag/similarity.hpp"
#include "dbtag/sql_ast.hpp"
#include "dbtag/sql_entities.hpp"
#include "dbtag/sql_parser.hpp"
#include "dbtag/tokenizer.hpp"
