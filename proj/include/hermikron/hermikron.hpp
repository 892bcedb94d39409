#pragma once

#include "hermikron/error.hpp"
#include "hermikron/random.hpp"
#include "hermikron/pencil.hpp"
#include "hermikron/lapack.hpp"
#include "hermikron/canonical.hpp"
#include "hermikron/generic_bundles.hpp"
#include "hermikron/exact_rank.hpp"
#include "hermikron/codim.hpp"
#include "hermikron/perturb.hpp"
#include "hermikron/infer.hpp"
#include "hermikron/verify.hpp"
#include "hermikron/experiment.hpp"
#include "hermikron/json_io.hpp"
