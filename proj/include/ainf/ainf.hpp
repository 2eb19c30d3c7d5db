#pragma once

#include "ainf/scalar.hpp"
#include "ainf/graded_space.hpp"
#include "ainf/multimap.hpp"
#include "ainf/linear_solver.hpp"
#include "ainf/coalgebra.hpp"
#include "ainf/ainfty.hpp"
#include "ainf/random.hpp"
#include "ainf/extension.hpp"
#include "ainf/planar_trees.hpp"
#include "ainf/homotopy_search.hpp"
#include "ainf/transfer.hpp"
#include "ainf/bifib.hpp"
#include "ainf/generator.hpp"
#include "ainf/format.hpp"
