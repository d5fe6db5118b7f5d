#pragma once

#include "autocorr/errors.hpp"
#include "autocorr/extremality.hpp"
#include "autocorr/functional.hpp"
#include "autocorr/grid_function.hpp"
#include "autocorr/io.hpp"
#include "autocorr/optimizer.hpp"
#include "autocorr/shift_matrix.hpp"
