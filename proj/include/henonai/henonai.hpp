#pragma once

#include "henonai/charts.hpp"
#include "henonai/continuation.hpp"
#include "henonai/entropy.hpp"
#include "henonai/errors.hpp"
#include "henonai/hyperbolicity.hpp"
#include "henonai/io.hpp"
#include "henonai/params.hpp"
#include "henonai/quadratic.hpp"
#include "henonai/scan.hpp"
