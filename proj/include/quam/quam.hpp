#pragma once

#include "quam/analysis.hpp"
#include "quam/error.hpp"
#include "quam/gates.hpp"
#include "quam/hopfield.hpp"
#include "quam/io.hpp"
#include "quam/patterns.hpp"
#include "quam/recall.hpp"
#include "quam/state.hpp"
#include "quam/storage.hpp"
