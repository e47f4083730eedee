#pragma once

#include "gapforge/commutant.hpp"
#include "gapforge/dmrg.hpp"
#include "gapforge/exact.hpp"
#include "gapforge/haar.hpp"
#include "gapforge/krylov.hpp"
#include "gapforge/layer_operator.hpp"
#include "gapforge/mpo.hpp"
#include "gapforge/numeric.hpp"
#include "gapforge/pairs.hpp"
#include "gapforge/rational.hpp"
#include "gapforge/serialize.hpp"
#include "gapforge/types.hpp"
