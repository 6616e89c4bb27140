#pragma once

// Umbrella header: the whole library.

#include "class_label.hpp"
#include "complex.hpp"
#include "connect.hpp"
#include "errors.hpp"
#include "filtration.hpp"
#include "flow.hpp"
#include "homology.hpp"
#include "index_theory.hpp"
#include "io.hpp"
#include "models.hpp"
#include "orbits.hpp"
#include "products.hpp"
#include "rational.hpp"
#include "sparse_f2.hpp"
#include "spectral.hpp"
