#ifndef SEPL_SEPL_HPP
#define SEPL_SEPL_HPP

// Convenience umbrella: pulls in the whole library.

#include "sepl/analysis.hpp"
#include "sepl/error.hpp"
#include "sepl/guard.hpp"
#include "sepl/policy.hpp"
#include "sepl/schema.hpp"
#include "sepl/semantics.hpp"
#include "sepl/transform.hpp"
#include "sepl/trivalue.hpp"
#include "sepl/xacml.hpp"
#include "sepl/xml.hpp"

#endif  // SEPL_SEPL_HPP
