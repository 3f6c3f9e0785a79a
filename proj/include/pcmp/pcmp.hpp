#pragma once

#include "pcmp/adversary.hpp"
#include "pcmp/analysis.hpp"
#include "pcmp/bb84.hpp"
#include "pcmp/bits.hpp"
#include "pcmp/blinding.hpp"
#include "pcmp/channel.hpp"
#include "pcmp/equality.hpp"
#include "pcmp/errors.hpp"
#include "pcmp/millionaire.hpp"
#include "pcmp/protocol.hpp"
#include "pcmp/rational.hpp"
#include "pcmp/rng.hpp"
