"""Free products: normal forms, the involution example, bounded malnormality,
and the two maps of *^m A into A * A.

Run with ``python3 demos/04_free_products.py``.
"""

from nilkgroups import (
    FiniteFactor,
    FreeNilpotentFactor,
    FreeProduct,
    bounded_malnormality,
    cyclic,
    embed_conjugates,
    embed_remark,
    example2_check,
)
from nilkgroups.freeprod import remark_kernel_element

# Two involutions x, y: conjugating xy by x inverts it, so <xy> meets a
# conjugate by an element outside it.
for A in (cyclic(2), cyclic(4)):
    x = next(g for g in range(A.order) if g and A.mul(g, g) == A.identity)
    v = example2_check(A, x, cyclic(2), 1)
    print(f"{A.name} * C2: x^-1 (xy) x = {v.stats['lhs']},  (xy)^-1 = {v.stats['inverse_xy']}")
print()

A = FreeNilpotentFactor(2, 2)
P = FreeProduct.copies(A, 2)
z = P.parse("0:x1 | 1:x1")
v = bounded_malnormality(P, z, radius=3, exp_bound=3)
print(f"A = free nil_2 of rank 2, z = {P.format(z)}")
print(f"  no x outside <z> with x^-1 z^n x = z^m in the radius-3 ball: {v.holds}"
      f" ({v.stats['words_checked']} words)")

D = FreeProduct.copies(FiniteFactor(cyclic(2)), 2)
v = bounded_malnormality(D, D.parse("0:#1 | 1:#1"), radius=3, exp_bound=3)
print(f"C2 * C2, z = xy: holds = {v.holds}, witness {v.witness.elements}\n")

# The literal map keeps copy 0 fixed and sends copy i to x1^-i C x1^i.  From
# three copies on, the first copy interacts with the conjugators and a
# nontrivial word dies.
for m, text in ((2, "1:x2 | 0:x1"), (3, "1:x2 | 2:x1")):
    Pm = FreeProduct.copies(A, m)
    w = Pm.parse(text)
    print(f"m = {m}: {Pm.format(w)}  ->  {P.format(embed_remark(m, w, A))}")
k = remark_kernel_element(3, A)
print(f"\nkernel word {FreeProduct.copies(A, 3).format(k)}")
print(f"  literal map:       {P.format(embed_remark(3, k, A)) or '1'}")
print(f"  conjugate map:     {P.format(embed_conjugates(3, k, A))}")
