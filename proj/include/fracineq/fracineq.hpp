#pragma once

#include "fracineq/error.hpp"
#include "fracineq/quadrature.hpp"
#include "fracineq/special.hpp"
#include "fracineq/types.hpp"
#include "fracineq/function_handle.hpp"
#include "fracineq/fracint.hpp"
#include "fracineq/random.hpp"
#include "fracineq/funcspace.hpp"
#include "fracineq/functionals.hpp"
#include "fracineq/bounds.hpp"
#include "fracineq/toml_lite.hpp"
#include "fracineq/harness.hpp"
