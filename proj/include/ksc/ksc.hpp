#ifndef KSC_KSC_HPP
#define KSC_KSC_HPP

#include "catalog.hpp"
#include "correlations.hpp"
#include "diophantine.hpp"
#include "error.hpp"
#include "extension.hpp"
#include "graph.hpp"
#include "json_io.hpp"
#include "ks_decision.hpp"
#include "lp.hpp"
#include "rational.hpp"
#include "realization.hpp"
#include "scenario.hpp"
#include "verify.hpp"

#endif
