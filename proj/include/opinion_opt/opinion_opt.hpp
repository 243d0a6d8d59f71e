#ifndef OPINION_OPT_OPINION_OPT_HPP
#define OPINION_OPT_OPINION_OPT_HPP

#include "opinion_opt/baselines.hpp"
#include "opinion_opt/bicg.hpp"
#include "opinion_opt/dense.hpp"
#include "opinion_opt/dynamics.hpp"
#include "opinion_opt/error.hpp"
#include "opinion_opt/experiment.hpp"
#include "opinion_opt/graph.hpp"
#include "opinion_opt/instance.hpp"
#include "opinion_opt/instance_io.hpp"
#include "opinion_opt/optimizer.hpp"
#include "opinion_opt/projection.hpp"
#include "opinion_opt/rng.hpp"
#include "opinion_opt/sparse_matrix.hpp"
#include "opinion_opt/vector_ops.hpp"

#endif  // OPINION_OPT_OPINION_OPT_HPP
