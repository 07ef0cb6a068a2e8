#pragma once

#include "spls/analysis.hpp"
#include "spls/assembly.hpp"
#include "spls/coefficient.hpp"
#include "spls/experiment.hpp"
#include "spls/fespace.hpp"
#include "spls/mesh.hpp"
#include "spls/problems.hpp"
#include "spls/projection.hpp"
#include "spls/quadrature.hpp"
#include "spls/solvers.hpp"
