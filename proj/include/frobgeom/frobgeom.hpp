#pragma once

#include "frobgeom/core.hpp"
#include "frobgeom/domains.hpp"
#include "frobgeom/frobenius.hpp"
#include "frobgeom/matrix.hpp"
#include "frobgeom/lattice.hpp"
#include "frobgeom/convexgeom.hpp"
#include "frobgeom/covering.hpp"
#include "frobgeom/ensemble.hpp"
#include "frobgeom/siegel.hpp"
#include "frobgeom/io.hpp"
