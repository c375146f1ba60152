#pragma once

#include "legdet/charmat.hpp"
#include "legdet/crt.hpp"
#include "legdet/error.hpp"
#include "legdet/exactla.hpp"
#include "legdet/matrix.hpp"
#include "legdet/ntheory.hpp"
#include "legdet/poly.hpp"
#include "legdet/realquad.hpp"
#include "legdet/scan.hpp"
#include "legdet/verify.hpp"
