#ifndef SUPERHEDGE_SUPERHEDGE_HPP
#define SUPERHEDGE_SUPERHEDGE_HPP

#include "rational.hpp"
#include "lp.hpp"
#include "polyhedron.hpp"
#include "market.hpp"
#include "exercise.hpp"
#include "seller.hpp"
#include "buyer.hpp"
#include "oracle.hpp"
#include "io.hpp"

#endif // SUPERHEDGE_SUPERHEDGE_HPP
