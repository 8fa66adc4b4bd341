"""Cycles of gaps in Eratosthenes sieve.

Build the cycle of gaps among the generators of Z mod p#, census gaps and
constellations with their driving terms exactly, run the exact population
model across sieve stages through its Pascal eigenstructure, evaluate
closed-form asymptotic ratios, and model gap survival under continued
sieving.
"""

from .census import (
    Census,
    Constellation,
    census_for,
    census_table,
    count_constellation,
    count_gap,
    driving_terms_for_constellation,
    driving_terms_for_gap,
)
from .cycle import (
    CacheFormatError,
    GapCycle,
    build_primorial_cycle,
    build_primorial_cycle_streaming,
    cycle_for_factors,
    extend_cycle,
    oracle_cycle,
    read_cache,
    render_compact,
    verify_cycle,
    write_cache,
)
from .dynsys import (
    CrossoverResult,
    PopulationVector,
    SystemMatrices,
    Validity,
    asymptotic_ratio,
    crossover,
    eigendecompose,
    eigenvalue_products,
    iterate,
    normalize,
    polynomial_approx,
    step,
    validity,
)
from .polignac import (
    RepetitionSpec,
    census_crosscheck,
    hl_ratio,
    partial_ratio,
    repetition_weight,
    seeded_total,
)
from .primal import (
    CapacityError,
    SquarefreeModulus,
    phi_i,
    primes_in,
    primorial,
    radical_of_even,
)
from .survival import (
    AttritionTrace,
    actual_gap_count,
    attrition,
    attrition_histograms_csv,
    error_report,
    fold_confirmed_front,
    naive_estimate,
)

__version__ = "0.1.0"
