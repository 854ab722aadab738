#pragma once

#include "klic/channel.hpp"
#include "klic/common.hpp"
#include "klic/io.hpp"
#include "klic/lattice.hpp"
#include "klic/layered.hpp"
#include "klic/parallel.hpp"
#include "klic/rate_engine.hpp"
#include "klic/rng.hpp"
#include "klic/simulate.hpp"
#include "klic/sweep.hpp"
