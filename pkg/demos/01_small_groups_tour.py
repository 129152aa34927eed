"""A walk through the anchor groups: which are NT_k, which are CSN_k, and why not.

Run with ``python3 demos/01_small_groups_tour.py``.
"""

from nilkgroups import (
    dihedral,
    eval_mal,
    eval_nil,
    heisenberg_mod_p,
    is_csnk,
    is_ntk,
    maximal_nilk_subgroups,
    nilpotency_class,
    quaternion8,
    symmetric,
)


def show_witness(G, v):
    if v.witness is None:
        return "-"
    w = v.witness
    parts = [f"{n}={G.label(g)}" for n, g in w.elements.items()]
    parts += [f"{n}=<{', '.join(G.label(g) for g in H.generators())}>" for n, H in w.subgroups.items()]
    return f"{w.kind.value}: " + " ".join(parts)


def describe(G, k):
    nt, csn = is_ntk(G, k), is_csnk(G, k)
    print(f"{G.name} (order {G.order}, class {nilpotency_class(G.whole())!r}), k = {k}")
    print(f"  NT_k  {nt.holds!s:5}  {show_witness(G, nt)}")
    print(f"  CSN_k {csn.holds!s:5}  {show_witness(G, csn)}")
    maxes = maximal_nilk_subgroups(G, k)
    print(f"  maximal nil_k subgroups: {sorted(H.order for H in maxes)}")
    print()


print("S3: centralizers of non-identity elements are abelian, but the rotations")
print("form a normal abelian subgroup, so they are not malnormal.\n")
describe(symmetric(3), 1)

print("Q8: every pair of the cyclic subgroups <i>, <j>, <k> shares -1.")
print("The Nil sentence fails at x = -1 because C^1(-1) is all of Q8.\n")
Q8 = quaternion8()
describe(Q8, 1)
v = eval_nil(Q8, 1)
print(f"  Nil witness {show_witness(Q8, v)}\n")
print("At k = 2 the whole group is nil_2, hence the only maximal one.\n")
describe(Q8, 2)

D5 = dihedral(5)
print("D5: the rotation r is conjugated to r^-1 by the reflection s.\n")
describe(D5, 1)
print(f"  Mal witness {show_witness(D5, eval_mal(D5, 1))}\n")

print("S4 at k = 2: two Sylow 2-subgroups meet in the Klein four-group.\n")
describe(symmetric(4), 2)

print("Heis(3) has class 2, so it is its own unique maximal nil_2 subgroup.\n")
describe(heisenberg_mod_p(3), 2)
