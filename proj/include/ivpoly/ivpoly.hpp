#pragma once

#include "ivpoly/bbasis.hpp"
#include "ivpoly/checks.hpp"
#include "ivpoly/coefficients.hpp"
#include "ivpoly/exact.hpp"
#include "ivpoly/floorcert/builtin.hpp"
#include "ivpoly/floorcert/certify.hpp"
#include "ivpoly/floorcert/eliminate.hpp"
#include "ivpoly/floorcert/floor_sum.hpp"
#include "ivpoly/floorcert/linear_form.hpp"
#include "ivpoly/floorcert/oracle.hpp"
#include "ivpoly/floorcert/spec.hpp"
#include "ivpoly/interval.hpp"
#include "ivpoly/relations.hpp"
