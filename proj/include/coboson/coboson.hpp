#pragma once

#include "coboson/errors.hpp"
#include "coboson/model_core.hpp"
#include "coboson/many_body.hpp"
#include "coboson/effective.hpp"
#include "coboson/scattering.hpp"
#include "coboson/propagation.hpp"
#include "coboson/dynamics.hpp"
#include "coboson/experiment.hpp"
