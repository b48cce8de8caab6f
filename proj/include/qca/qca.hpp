#pragma once

#include "qca/compat.hpp"
#include "qca/error.hpp"
#include "qca/fixtures.hpp"
#include "qca/integer.hpp"
#include "qca/laurent.hpp"
#include "qca/matrix.hpp"
#include "qca/nullspace.hpp"
#include "qca/seed.hpp"
#include "qca/structure.hpp"
#include "qca/symmetrizer.hpp"
#include "qca/torus.hpp"
