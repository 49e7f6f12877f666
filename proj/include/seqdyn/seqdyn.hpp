#pragma once

#include "seqdyn/core/budget.hpp"
#include "seqdyn/core/entropy.hpp"
#include "seqdyn/core/errors.hpp"
#include "seqdyn/core/geometry.hpp"
#include "seqdyn/core/parallel.hpp"
#include "seqdyn/core/partition.hpp"
#include "seqdyn/core/rational.hpp"
#include "seqdyn/seqentropy/asymmetry.hpp"
#include "seqdyn/seqentropy/boundary.hpp"
#include "seqdyn/seqentropy/index_family.hpp"
#include "seqdyn/seqentropy/join.hpp"
#include "seqdyn/seqentropy/monte_carlo.hpp"
#include "seqdyn/seqentropy/trace.hpp"
#include "seqdyn/systems/bernoulli.hpp"
#include "seqdyn/systems/interval_exchange.hpp"
#include "seqdyn/systems/rectangle_exchange.hpp"
#include "seqdyn/systems/rotation.hpp"
#include "seqdyn/weaklimits/correlation.hpp"
#include "seqdyn/weaklimits/distance.hpp"
#include "seqdyn/weaklimits/scan.hpp"
#include "seqdyn/weaklimits/test_family.hpp"
#include "seqdyn/weaklimits/triple.hpp"
