#pragma once

#include "cmz/analysis.hpp"
#include "cmz/cbc_quadrature.hpp"
#include "cmz/differential_evolution.hpp"
#include "cmz/errors.hpp"
#include "cmz/format.hpp"
#include "cmz/fractal_model.hpp"
#include "cmz/io.hpp"
#include "cmz/optimizer.hpp"
#include "cmz/quadrature.hpp"
#include "cmz/ws_potential.hpp"
#include "cmz/zeta_zeros.hpp"
