"""Finite-group deciders for the NT_k and CSN_k properties, Magnus-series
arithmetic in free nilpotent groups, free products of nilpotent and finite
factors, and a verification harness over a corpus of small groups."""

__version__ = "0.1.0"

from .errors import BadParams, NotAGroup, OrderLimitExceeded, ParseError, SearchBudgetExceeded
from .finite import (
    NOT_NILPOTENT,
    FiniteGroup,
    Subgroup,
    alternating,
    build_family,
    central_series,
    cyclic,
    dihedral,
    direct_product,
    from_cayley_table,
    from_permutation_generators,
    heisenberg_mod_p,
    nilpotency_class,
    quaternion8,
    semidirect_z_p_on_z_q,
    subgroup_generate,
    symmetric,
)
from .nilk import (
    Verdict,
    Witness,
    WitnessKind,
    ck_set,
    eval_mal,
    eval_nil,
    eval_subgp,
    is_csa,
    is_csnk,
    is_ct,
    is_malnormal,
    is_maximal_nilk,
    is_nilk,
    is_ntk,
    maximal_nilk_subgroups,
    q_predicate,
)
from .magnus import (
    Class2Coordinates,
    FreeWord,
    TruncatedSeries,
    collect_class2,
    equal_nmk,
    is_identity_nmk,
    magnus_image,
    parse_word,
)
from .freeprod import (
    FiniteFactor,
    FPWord,
    FreeNilpotentFactor,
    FreeProduct,
    bounded_malnormality,
    embed_conjugates,
    embed_remark,
    example2_check,
)
from .harness import PROPOSITIONS, build_default_corpus, run_all, verify_proposition
