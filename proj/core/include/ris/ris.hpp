#pragma once

#include "ris/channel.hpp"
#include "ris/errors.hpp"
#include "ris/geometry.hpp"
#include "ris/impedance.hpp"
#include "ris/quadrature.hpp"
#include "ris/special_functions.hpp"
#include "ris/types.hpp"
