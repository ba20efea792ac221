#pragma once

#include "cfseries/errors.hpp"
#include "cfseries/rational.hpp"
#include "cfseries/words.hpp"
#include "cfseries/series.hpp"
#include "cfseries/families.hpp"
#include "cfseries/interconnect.hpp"
#include "cfseries/entropy.hpp"
#include "cfseries/chen_fliess.hpp"
#include "cfseries/text_io.hpp"
#include "cfseries/expr.hpp"
#include "cfseries/identities.hpp"
