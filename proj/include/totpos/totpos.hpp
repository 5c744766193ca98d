#ifndef TOTPOS_TOTPOS_HPP
#define TOTPOS_TOTPOS_HPP

#include "totpos/bigfloat.hpp"
#include "totpos/gamma.hpp"
#include "totpos/matrix.hpp"
#include "totpos/premium.hpp"
#include "totpos/quadrature.hpp"
#include "totpos/rational.hpp"
#include "totpos/symfunc.hpp"
#include "totpos/tpcheck.hpp"
#include "totpos/weights.hpp"

#endif  // TOTPOS_TOTPOS_HPP
