#pragma once

#include "svdd/data_matrix.hpp"
#include "svdd/datagen.hpp"
#include "svdd/distributed.hpp"
#include "svdd/error.hpp"
#include "svdd/eval.hpp"
#include "svdd/io.hpp"
#include "svdd/kernel.hpp"
#include "svdd/model.hpp"
#include "svdd/qp_solver.hpp"
#include "svdd/trainer_full.hpp"
#include "svdd/trainer_sampling.hpp"
