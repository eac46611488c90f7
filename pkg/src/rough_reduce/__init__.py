"""Two-stage feature reduction (eigenspace projection + rough-set reducts)
with a backpropagation MLP classifier."""

from .discretize import (
    DiscretizationModel,
    QuantileDiscretizer,
    discretize,
    discretize_matrix,
    fit_discretizer,
)
from .eigenspace import (
    DropFirst,
    DropLastFraction,
    Eigenspace,
    EigenspaceProjection,
    Energy,
    SelectionStrategy,
    Standard,
    Stretch,
    fit_eigenspace,
    mean_center,
    project,
    reconstruct,
    select,
    strategy_from_name,
    truncate,
)
from .mlp import (
    MlpClassifier,
    MlpNetwork,
    TrainConfig,
    backprop_step,
    classify,
    encode_targets,
    forward,
    init_network,
    train,
)
from .model_io import (
    ChecksumMismatchError,
    MalformedSectionError,
    ModelFormatError,
    PipelineModel,
    UnsupportedVersionError,
    load_model,
    model_from_text,
    model_to_text,
    save_model,
)
from .pgm import Dataset, PgmParseError, load_dataset, load_pgm, parse_pgm, split
from .pipeline import (
    EvalReport,
    PipelineConfig,
    evaluate_model,
    report_to_text,
    run_pipeline,
    sweep_dimensions,
    sweep_to_csv,
)
from .rough import (
    EXHAUSTIVE_LIMIT,
    ExhaustiveSearchLimitError,
    InconsistentTableError,
    boundary,
    core,
    core_values,
    dependency_degree,
    greedy_reduct,
    is_dispensable,
    lower_approx,
    minimize_table,
    minimum_reduct,
    most_shared_picker,
    partition_by,
    positive_region,
    relative_reducts,
    upper_approx,
    value_reducts,
)
from .selection import (
    FeatureSelection,
    RoughSetFeatureSelector,
    build_decision_table,
    reduce_vector,
    select_features,
)
from .table import (
    DecisionTable,
    Partition,
    ReducedRule,
    reduced_rules_from_text,
    reduced_rules_to_text,
    table_from_text,
    table_to_text,
)

__version__ = "0.1.0"
