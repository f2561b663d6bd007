#pragma once

#include "samdisc/ball.hpp"
#include "samdisc/concentration.hpp"
#include "samdisc/discretize.hpp"
#include "samdisc/entropy.hpp"
#include "samdisc/errors.hpp"
#include "samdisc/freq_set.hpp"
#include "samdisc/grid.hpp"
#include "samdisc/jsonio.hpp"
#include "samdisc/ortho_system.hpp"
#include "samdisc/parallel.hpp"
#include "samdisc/point_set.hpp"
#include "samdisc/random_poly.hpp"
#include "samdisc/rng.hpp"
#include "samdisc/sandwich.hpp"
#include "samdisc/trig_poly.hpp"
