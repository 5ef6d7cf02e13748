#pragma once

#include "coherent/benchmarks.hpp"
#include "coherent/clustering.hpp"
#include "coherent/errors.hpp"
#include "coherent/estimation.hpp"
#include "coherent/graph.hpp"
#include "coherent/io.hpp"
#include "coherent/metrics.hpp"
#include "coherent/operators.hpp"
#include "coherent/rng.hpp"
#include "coherent/spectral.hpp"
