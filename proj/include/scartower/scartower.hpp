#pragma once

#include "scartower/circuit.hpp"
#include "scartower/errors.hpp"
#include "scartower/fock.hpp"
#include "scartower/json_io.hpp"
#include "scartower/models.hpp"
#include "scartower/op_algebra.hpp"
#include "scartower/parent_decomp.hpp"
#include "scartower/rng.hpp"
#include "scartower/site_graph.hpp"
#include "scartower/spectral.hpp"
#include "scartower/tower_spec.hpp"
