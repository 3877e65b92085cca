#pragma once

#include "latnorm/arith.hpp"
#include "latnorm/point.hpp"
#include "latnorm/unimodular.hpp"
#include "latnorm/polytope.hpp"
#include "latnorm/classify.hpp"
#include "latnorm/normality.hpp"
#include "latnorm/cover.hpp"
#include "latnorm/generators.hpp"
#include "latnorm/certificate.hpp"
#include "latnorm/fibered.hpp"
#include "latnorm/io.hpp"
