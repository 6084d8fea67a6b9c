"""simvote: similarity-driven defuzzification of categorical records.

Validates fuzzy similarity matrices, derives partition trees from their
alpha-cuts, and converts multi-valued (fuzzy) categorical records into
normalized per-label vote distributions.  Includes a synthetic tree/record
generator and a scalability benchmark harness; see the CLI (`simvote`) for
the file-based workflow.
"""

from .bench import (
    BenchPlan,
    BenchResult,
    BenchRow,
    ScalingReport,
    TreeScaling,
    analyze_scaling,
    emit_bench_csv,
    emit_plot_svg,
    run_benchmark,
)
from .datagen import (
    DatasetSpec,
    TreeSpec,
    domain_labels,
    generate_records,
    generate_tree,
)
from .defuzz import (
    FuzzyRecord,
    GradeVector,
    ResemblanceTable,
    Skipped,
    TraceEntry,
    VoteDistribution,
    defuzzify_batch,
    defuzzify_record,
    enumerate_query_subsets,
    extract_resemblances,
    extract_resemblances_literal,
    extract_resemblances_oracle,
    grade,
    normalize,
    resemblance_trace,
    table_from_trace,
)
from .errors import (
    DuplicateLabel,
    EmptyQuery,
    InfeasibleSpec,
    InsufficientPoints,
    InvariantViolation,
    MalformedInput,
    NotReflexive,
    NotSymmetric,
    NotTransitive,
    QueryTooLarge,
    SimvoteError,
    UnknownLabel,
    ValueOutOfRange,
)
from .matrix import (
    SimilarityMatrix,
    TransitivityReport,
    TransitivityViolation,
    alpha_cut,
    check_max_min_transitivity,
    distinct_levels,
    format_similarity_matrix,
    parse_similarity_matrix,
)
from .records import (
    format_batch_csv,
    format_records_file,
    parse_records_file,
    render_trace_table,
)
from .tree import (
    PartitionTree,
    TreeNode,
    build_partition_tree,
    induced_similarity,
    parse_tree,
    render_tree,
    serialize_tree,
)

__version__ = "0.1.0"
