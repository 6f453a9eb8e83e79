#ifndef POSETMC_HPP
#define POSETMC_HPP

#include "posetmc/canon.hpp"
#include "posetmc/checker.hpp"
#include "posetmc/commands.hpp"
#include "posetmc/evaluate.hpp"
#include "posetmc/formula.hpp"
#include "posetmc/interval.hpp"
#include "posetmc/io.hpp"
#include "posetmc/poset.hpp"
#include "posetmc/typegraph.hpp"

#endif // POSETMC_HPP
