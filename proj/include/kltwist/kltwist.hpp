#pragma once

#include "kltwist/rational.hpp"
#include "kltwist/polynomial.hpp"
#include "kltwist/matrix.hpp"
#include "kltwist/cyclotomic.hpp"
#include "kltwist/rational_function.hpp"
#include "kltwist/root_datum.hpp"
#include "kltwist/torus_point.hpp"
#include "kltwist/group_ring.hpp"
#include "kltwist/hecke.hpp"
#include "kltwist/kl_parameters.hpp"
#include "kltwist/formal_degree.hpp"
#include "kltwist/serialize.hpp"
