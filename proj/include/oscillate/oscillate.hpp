// Umbrella header.
#pragma once

#include "exact.hpp"
#include "poly.hpp"
#include "matrix.hpp"
#include "roots.hpp"
#include "complex.hpp"
#include "system.hpp"
#include "reduction.hpp"
#include "numerics.hpp"
#include "symmetrization.hpp"
#include "bounds.hpp"
#include "verify.hpp"
#include "corpus.hpp"
#include "io.hpp"
