#pragma once

#include "routesim/dqrc/agent.hpp"
#include "routesim/dqrc/encoder.hpp"
#include "routesim/dqrc/pretrain.hpp"
#include "routesim/dqrc/replay.hpp"
#include "routesim/error.hpp"
#include "routesim/exp/export.hpp"
#include "routesim/exp/factory.hpp"
#include "routesim/exp/parallel.hpp"
#include "routesim/exp/protocols.hpp"
#include "routesim/exp/scenario.hpp"
#include "routesim/metrics.hpp"
#include "routesim/nn/fit.hpp"
#include "routesim/nn/network.hpp"
#include "routesim/nn/optimizer.hpp"
#include "routesim/packet.hpp"
#include "routesim/policies/backpressure.hpp"
#include "routesim/policies/q_routing.hpp"
#include "routesim/policies/shortest_path.hpp"
#include "routesim/policy.hpp"
#include "routesim/rng.hpp"
#include "routesim/simkernel.hpp"
#include "routesim/topology.hpp"
#include "routesim/traffic.hpp"
