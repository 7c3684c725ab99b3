// Umbrella header: exact function-space priors of finite deep Bayesian
// networks (linear and ReLU) for a single input, with their asymptotic and
// Monte Carlo companions.

#pragma once

#include "deepprior/asymptotics.hpp"
#include "deepprior/bessel.hpp"
#include "deepprior/errors.hpp"
#include "deepprior/gamma_functions.hpp"
#include "deepprior/hankel.hpp"
#include "deepprior/linear_prior.hpp"
#include "deepprior/mc_oracle.hpp"
#include "deepprior/mellin_barnes.hpp"
#include "deepprior/nested_integral.hpp"
#include "deepprior/network_spec.hpp"
#include "deepprior/quadrature.hpp"
#include "deepprior/relu_prior.hpp"
#include "deepprior/rng.hpp"
#include "deepprior/table_io.hpp"
#include "deepprior/tails.hpp"
