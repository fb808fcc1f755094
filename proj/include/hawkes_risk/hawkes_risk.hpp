#ifndef HAWKES_RISK_HAWKES_RISK_HPP_
#define HAWKES_RISK_HAWKES_RISK_HPP_

#include "hawkes_risk/analytics.hpp"
#include "hawkes_risk/hawkes.hpp"
#include "hawkes_risk/kernel.hpp"
#include "hawkes_risk/markov_chain.hpp"
#include "hawkes_risk/montecarlo.hpp"
#include "hawkes_risk/parallel.hpp"
#include "hawkes_risk/random.hpp"
#include "hawkes_risk/risk_process.hpp"
#include "hawkes_risk/scenario.hpp"
#include "hawkes_risk/stats.hpp"

#endif  // HAWKES_RISK_HAWKES_RISK_HPP_
