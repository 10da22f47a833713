#pragma once

// Umbrella header: table discovery over data lakes with five-evidence
// sketch indexes, combined-distance ranking and subject-attribute join paths.

#include "lakefind/cli.hpp"
#include "lakefind/common.hpp"
#include "lakefind/config.hpp"
#include "lakefind/csv.hpp"
#include "lakefind/embedding.hpp"
#include "lakefind/eval.hpp"
#include "lakefind/evidence.hpp"
#include "lakefind/index.hpp"
#include "lakefind/ingest.hpp"
#include "lakefind/joins.hpp"
#include "lakefind/ks.hpp"
#include "lakefind/lsh_forest.hpp"
#include "lakefind/minhash.hpp"
#include "lakefind/profile.hpp"
#include "lakefind/random_projection.hpp"
#include "lakefind/relatedness.hpp"
#include "lakefind/table.hpp"
#include "lakefind/tokenize.hpp"
