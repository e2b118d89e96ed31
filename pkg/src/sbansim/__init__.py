"""Added automata needed for a block-sequential Boolean automata network to
simulate a parallel one, via colorings of the NECC confusability graph."""

from .coloring import (
    ChromaticResult,
    Coloring,
    InvalidColoring,
    SimpleGraph,
    exact_chromatic_number,
    greedy_color_by_degree,
    max_clique_generic,
    max_clique_necc,
    validate_coloring,
)
from .confusability import (
    ConfusabilityGraph,
    ImageQuotientGraph,
    ResourceLimitError,
    StepInterval,
    build_inecc_graph,
    build_necc_graph,
    cc_steps,
    is_nec,
    sequentialize,
)
from .core import (
    BooleanNetwork,
    Embedding,
    NetworkError,
    UpdateSchedule,
    check_simulation,
    decode,
    encode,
    partial_parallel_update,
    prefix_scheduled_update,
    step_scheduled,
    update_block,
    validate_schedule_extension,
)
from .generators import (
    GeneratorSpec,
    figure_example,
    random_bijective,
    random_network,
    random_schedule,
    swap_network,
)
from .synthesis import KappaResult, SynthesisResult, extract_coloring, kappa, synthesize

__version__ = "0.1.0"
