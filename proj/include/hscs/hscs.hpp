#ifndef HSCS_HSCS_HPP
#define HSCS_HSCS_HPP

#include "hscs/common.hpp"
#include "hscs/cube.hpp"
#include "hscs/gomp.hpp"
#include "hscs/linalg.hpp"
#include "hscs/metrics.hpp"
#include "hscs/pipeline.hpp"
#include "hscs/sensing.hpp"
#include "hscs/sparsify.hpp"

#endif  // HSCS_HSCS_HPP
