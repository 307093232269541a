#pragma once

#include "fsmp/error.hpp"
#include "fsmp/graph.hpp"
#include "fsmp/generators.hpp"
#include "fsmp/matching.hpp"
#include "fsmp/preclusion.hpp"
#include "fsmp/harness.hpp"
