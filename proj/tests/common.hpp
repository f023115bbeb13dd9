#ifndef RELFIX_TESTS_COMMON_HPP
#define RELFIX_TESTS_COMMON_HPP

#include "relfix/relfix.hpp"

namespace fixture {

inline relfix::FunctorExpr lazy_nat() { return relfix::f_sum(relfix::f_one(), relfix::f_var()); }
inline relfix::FunctorExpr streams() {
  return relfix::f_lift(relfix::f_prod(relfix::f_const(relfix::chain_poset(2)), relfix::f_var()));
}
inline relfix::FunctorExpr reflexive() { return relfix::f_lift(relfix::f_fun(relfix::f_var(), relfix::f_var())); }

}  // namespace fixture

#endif  // RELFIX_TESTS_COMMON_HPP
