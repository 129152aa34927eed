"""Survey of the default corpus: the NT_k groups that fail CSN_k, each with
a non-nil_k subgroup G0 carrying a nontrivial normal nil_k subgroup A.

Run with ``python3 demos/02_dichotomy_survey.py [max_order]``.
"""

import sys
from collections import Counter

from nilkgroups import build_default_corpus, is_csnk, is_ntk
from nilkgroups.harness import find_dichotomy_witness

max_order = int(sys.argv[1]) if len(sys.argv) > 1 else 32
corpus = build_default_corpus(max_order)
print(f"{len(corpus)} groups of order <= {max_order}\n")

for k in (1, 2, 3):
    tally = Counter()
    print(f"k = {k}")
    for entry in corpus:
        G = entry.group
        nt, csn = is_ntk(G, k).holds, is_csnk(G, k).holds
        tally[nt, csn] += 1
        if nt and not csn:
            w = find_dichotomy_witness(G, k)
            G0, A = w.subgroups["G0"], w.subgroups["A"]
            gens = ", ".join(G.label(g) for g in A.generators())
            print(f"  {G.name:12s} |G0| = {G0.order:3d}   A = <{gens}> of order {A.order}")
    print(f"  NT and CSN: {tally[True, True]}, NT only: {tally[True, False]}, "
          f"neither: {tally[False, False]}, CSN only: {tally[False, True]}\n")
