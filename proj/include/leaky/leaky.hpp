#pragma once

#include "leaky/bpm.hpp"
#include "leaky/core.hpp"
#include "leaky/curve.hpp"
#include "leaky/errors.hpp"
#include "leaky/fbw.hpp"
#include "leaky/fields.hpp"
#include "leaky/resonances.hpp"
#include "leaky/scattering.hpp"
#include "leaky/shift.hpp"
