"""Tour of the exact free-field calculus.

Builds the bosonic generators, computes their singular OPEs, checks
the Virasoro element, and evaluates the four structural identities on
a concrete triple.  Everything is an exact rational computation; every
printed equality is literal equality of states.
"""

from fractions import Fraction

from vertexfock import (
    AlgebraDescriptor,
    BETA,
    GAMMA,
    State,
    check_identities,
    circle,
    derive,
    generator_state,
    iterated_wick,
    ope_table,
    state_to_text,
    vacuum,
    weight,
)

alg = AlgebraDescriptor("bg", 2)
beta1 = generator_state(BETA, 1)
gamma1 = generator_state(GAMMA, 1)
gamma2 = generator_state(GAMMA, 2)

print("== pairings ==")
print("beta1 o_0 gamma1 =", state_to_text(circle(beta1, 0, gamma1)))
print("beta1 o_0 gamma2 =", state_to_text(circle(beta1, 0, gamma2)))
print("gamma1 o_0 beta1 =", state_to_text(circle(gamma1, 0, beta1)))

print("\n== the stress tensor L = sum_i :beta^i d gamma^i: ==")
L = State()
for i in (1, 2):
    L = L + iterated_wick([generator_state(BETA, i), derive(generator_state(GAMMA, i))])
print("L =", state_to_text(L))
print("OPE of L with itself:")
print(" ", ope_table(L, L).to_text("L(z)L(w)"))
print("fourth-order pole = n * vacuum (central charge 2n with n = 2)")

s = iterated_wick([beta1, gamma2])
print("\nL o_0 acts as the derivative:", circle(L, 0, s) == derive(s))
print("L o_1 reads off the weight:  ", circle(L, 1, s) == Fraction(weight(s)) * s)

print("\n== the four circle-product identities on (beta1, gamma1, beta1), n = 2 ==")
rep = check_identities(beta1, gamma1, beta1, 2)
for name, defect in rep.defects.items():
    print(f"  {name:<20} {'exact' if not defect else 'FAILED'}")
print("vacuum is the unit:", circle(vacuum(), -1, L) == L)
