#ifndef CIRCCS_CIRCCS_HPP
#define CIRCCS_CIRCCS_HPP

#include "circcs/core.hpp"
#include "circcs/dense.hpp"
#include "circcs/circulant.hpp"
#include "circcs/sensing.hpp"
#include "circcs/filtering.hpp"
#include "circcs/multinode.hpp"
#include "circcs/apps.hpp"
#include "circcs/diagnostics/oracle.hpp"

#endif  // CIRCCS_CIRCCS_HPP
