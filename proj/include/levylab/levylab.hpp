#pragma once

#include "levylab/bernstein.hpp"
#include "levylab/catalog.hpp"
#include "levylab/config.hpp"
#include "levylab/errors.hpp"
#include "levylab/experiment.hpp"
#include "levylab/grid.hpp"
#include "levylab/io.hpp"
#include "levylab/lattice.hpp"
#include "levylab/levy_measure.hpp"
#include "levylab/montecarlo.hpp"
#include "levylab/operators.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/random.hpp"
#include "levylab/subordination.hpp"
#include "levylab/ucp_probe.hpp"
