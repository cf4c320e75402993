#pragma once

#include "gostrata/dieudonne.hpp"
#include "gostrata/error.hpp"
#include "gostrata/lattice.hpp"
#include "gostrata/links.hpp"
#include "gostrata/picard.hpp"
#include "gostrata/places.hpp"
#include "gostrata/serialize.hpp"
#include "gostrata/strata.hpp"
#include "gostrata/witt.hpp"
#include "gostrata/verify.hpp"
