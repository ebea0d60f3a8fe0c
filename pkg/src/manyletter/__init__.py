"""Simulation of quantum messages of variable length.

Messages live in the many-letter space: the direct sum of the tensor-power
block spaces of a quantum alphabet, truncated at a maximum length.
"""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    ManyLetterError,
    ShapeMismatchError,
    SpecFormatError,
    ValidationError,
    ZeroNormError,
)
from .letterspace import (
    LetterMatrix,
    QuantumAlphabet,
    expand_letter,
    gram_matrix,
    letter_matrix,
    letter_spectral,
    make_alphabet,
)
from .mstate import (
    ManyLetterState,
    SpaceShape,
    basis_state,
    from_index,
    global_index,
    inner_product,
    product_message,
    superpose,
    truncate,
    wave_component,
)
from .ensembles import (
    BlockDecomposition,
    Ensemble,
    MessageMatrix,
    block_diagonalize,
    canonical_matrix,
    eigen_ensemble,
    ensembles_equivalent,
    grand_canonical_ensemble,
    grand_canonical_matrix,
    message_matrix,
    product_ensemble_matrix,
    source_rank,
    spectral_decomposition,
)
from .operators import (
    LengthProjector,
    Observable,
    commutator_norm,
    ensemble_average,
    expectation,
    expected_length,
    length_operator,
    length_projector,
)
from .measurement import (
    MeasurementOutcome,
    dephase_length,
    length_outcome_distribution,
    measure_basis,
    measure_length,
    sample_statistics,
)
