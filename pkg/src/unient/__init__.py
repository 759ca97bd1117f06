"""Unified-(q,s) entanglement measures and weighted shareability checks."""

from .entropy import (
    UnifiedParams,
    renyi_entropy,
    tsallis_entropy,
    unified_entropy,
    von_neumann_entropy,
)
from .hamming import BinaryVector, binary_vector, hamming_weight, lemma1_check
from .inequality import (
    ChainCertificate,
    InequalityReport,
    RegionSpec,
    check_monogamy_hamming,
    check_monogamy_indexed,
    check_monogamy_plain,
    check_polygamy_hamming,
    check_polygamy_indexed,
    check_polygamy_plain,
    order_subsystems,
    pad_parties,
    tightness_chain,
)
from .measures import Decomposition, OptBudget, RoofResult, ue_mixed, ue_pure, ueoa
from .qstate import (
    Bipartition,
    DensityMatrix,
    PureState,
    Spectrum,
    bipartition_of,
    haar_random_pure,
    hermitian_spectrum,
    load_state,
    named_state,
    partial_trace,
    pure_marginal_spectrum,
    purify,
    random_mixed,
    save_state,
)

__version__ = "0.1.0"
