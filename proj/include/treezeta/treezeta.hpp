#pragma once

#include "treezeta/asymptotics.hpp"
#include "treezeta/birth.hpp"
#include "treezeta/census.hpp"
#include "treezeta/error.hpp"
#include "treezeta/factor.hpp"
#include "treezeta/partitions.hpp"
#include "treezeta/sieve.hpp"
#include "treezeta/tree.hpp"
#include "treezeta/tree_zeta.hpp"
#include "treezeta/zeta.hpp"
