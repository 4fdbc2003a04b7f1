#ifndef KASHAEV_KASHAEV_HPP
#define KASHAEV_KASHAEV_HPP

#include "kashaev/cf.hpp"
#include "kashaev/double_double.hpp"
#include "kashaev/errors.hpp"
#include "kashaev/experiments.hpp"
#include "kashaev/invariant.hpp"
#include "kashaev/log_value.hpp"
#include "kashaev/ostrowski.hpp"
#include "kashaev/rational.hpp"
#include "kashaev/sudler.hpp"

#endif
