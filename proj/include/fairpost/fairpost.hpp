#pragma once

// Umbrella header: post-processing for statistical parity via distribution
// barycenters, loss/disparity frontier sweeps, and individual-fairness
// compatibility certificates.

#include "fairpost/errors.hpp"
#include "fairpost/dataset.hpp"
#include "fairpost/quantile.hpp"
#include "fairpost/linalg.hpp"
#include "fairpost/synthetic.hpp"
#include "fairpost/barycenter.hpp"
#include "fairpost/disparity.hpp"
#include "fairpost/pareto.hpp"
#include "fairpost/certify.hpp"
#include "fairpost/ols.hpp"
#include "fairpost/serialize.hpp"
#include "fairpost/svg.hpp"
#include "fairpost/commands.hpp"
