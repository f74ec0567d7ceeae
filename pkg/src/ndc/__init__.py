"""Block decompositions of operators on l2(N) with certified numerics.

Public surface:

- :mod:`ndc.model` - partitions, operator representations, bound types
- :mod:`ndc.numerics` - spectral norm / minimum eigenvalue kernels
- :mod:`ndc.decomposition` - blocks, hooks, membership, partial-sum gaps
- :mod:`ndc.compressions` - norm and positivity via finite compressions
- :mod:`ndc.constructions` - the generator gallery
- :mod:`ndc.cli` - the ``ndc`` command
"""

from .model import (
    BasisIndex,
    BlockId,
    CantorCoarsen,
    ExplicitOperator,
    FiniteMatrix,
    GeneratedOperator,
    NormBound,
    OperatorRep,
    Partition,
    StripCertificate,
    TailCertificate,
    Uniform,
    WitnessFamily,
    cantor_pair,
    cantor_unpair,
    entry_at,
)
from .numerics import Tolerance, min_eig_hermitian, spectral_norm
from .decomposition import (
    CertifiedIn,
    CertifiedOut,
    Empirical,
    HookPoint,
    hook,
    hook_sequence,
    membership,
    partial_sum_gap,
    peirce_block,
    reconstruct,
)
from .compressions import (
    CompressionSchedule,
    NegativeWitness,
    NotHermitian,
    PositiveUpTo,
    compression,
    norm_via_compressions,
    positivity_via_compressions,
)
from . import constructions

__version__ = "0.1.0"

__all__ = [
    "BasisIndex",
    "BlockId",
    "CantorCoarsen",
    "CertifiedIn",
    "CertifiedOut",
    "CompressionSchedule",
    "Empirical",
    "ExplicitOperator",
    "FiniteMatrix",
    "GeneratedOperator",
    "HookPoint",
    "NegativeWitness",
    "NormBound",
    "NotHermitian",
    "OperatorRep",
    "Partition",
    "PositiveUpTo",
    "StripCertificate",
    "TailCertificate",
    "Tolerance",
    "Uniform",
    "WitnessFamily",
    "cantor_pair",
    "cantor_unpair",
    "compression",
    "constructions",
    "entry_at",
    "hook",
    "hook_sequence",
    "membership",
    "min_eig_hermitian",
    "norm_via_compressions",
    "partial_sum_gap",
    "peirce_block",
    "positivity_via_compressions",
    "reconstruct",
    "spectral_norm",
]
