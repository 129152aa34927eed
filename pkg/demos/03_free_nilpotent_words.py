"""Deciding equality in free nilpotent groups with truncated Magnus series.

Run with ``python3 demos/03_free_nilpotent_words.py``.
"""

from nilkgroups import collect_class2, is_identity_nmk, magnus_image, parse_word
from nilkgroups.magnus import FreeWord, left_normed

# A commutator starts in degree 2 of its series.
c = parse_word("[x1,x2]")
for k in (1, 2, 3):
    print(f"[x1,x2] truncated at degree {k}: {magnus_image(c, 2, k)}")
print()

# Squaring a product needs one commutator correction in class 2, and that
# correction stops being enough in class 3.
lhs, rhs = parse_word("(x1 x2)^2"), parse_word("x1^2 x2^2 [x2,x1]")
for k in (2, 3):
    same = is_identity_nmk(lhs * rhs.inverse(), 2, k)
    print(f"(x1x2)^2 == x1^2 x2^2 [x2,x1] in class {k}: {same}")
print(f"collected coordinates of (x1x2)^2: {collect_class2(lhs, 2)}\n")

# A left-normed commutator of weight c dies exactly in class c - 1.
for weight in (2, 3, 4):
    w = left_normed([FreeWord.gen(i) for i in [1, 2] + [1] * (weight - 2)])
    alive = [k for k in range(1, 6) if not is_identity_nmk(w, 2, k)]
    print(f"[x1,x2{',x1' * (weight - 2)}] is nontrivial from class {alive[0]} on")
