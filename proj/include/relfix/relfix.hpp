#ifndef RELFIX_RELFIX_HPP
#define RELFIX_RELFIX_HPP

#include "relfix/error.hpp"
#include "relfix/poset.hpp"
#include "relfix/ep.hpp"
#include "relfix/relation.hpp"
#include "relfix/functor.hpp"
#include "relfix/chain.hpp"
#include "relfix/engines.hpp"
#include "relfix/cofe.hpp"
#include "relfix/karoubi.hpp"
#include "relfix/dsl.hpp"
#include "relfix/suites.hpp"
#include "relfix/report.hpp"

#endif  // RELFIX_RELFIX_HPP
