#pragma once

#include "fluxdiff/harness/benchmark.hpp"
#include "fluxdiff/harness/config.hpp"
#include "fluxdiff/harness/convergence.hpp"
#include "fluxdiff/harness/csv.hpp"
#include "fluxdiff/harness/problem.hpp"
#include "fluxdiff/harness/run.hpp"
#include "fluxdiff/harness/verify.hpp"
