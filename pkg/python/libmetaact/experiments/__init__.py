"""Experiment orchestration and the ``metaact`` command line interface

The :py:mod:`libmetaact.experiments` module provides:

- :class:`ExperimentConfig`, a JSON-serializable description of an experiment
  (task, architecture, training and meta-learning settings, seeds), and named
  presets in :data:`PRESETS`
- Commands writing CSV and JSON outputs: :func:`cmd_train`, :func:`cmd_meta`,
  :func:`cmd_transfer_matrix`, :func:`cmd_prefactor_sweep`, :func:`cmd_analyze`
  and :func:`cmd_gen_data`
- :func:`knn_baseline`, a k-nearest-neighbors reference classifier
- :func:`run_parallel`, which fans independent runs out to worker processes
- :func:`main`, the entry point of the ``metaact`` command

"""
from ._analyze import (
    ANALYSES,
    KNN_COLUMNS,
    cmd_analyze,
)
from ._cli import (
    COMMANDS,
    EXIT_CONFIG_ERROR,
    EXIT_NUMERICAL_FAILURE,
    build_parser,
    load_config,
    main,
)
from ._ExperimentConfig import (
    TASK_TYPES,
    ExperimentConfig,
    check_task,
    read_experiment_config,
)
from ._knn import (
    KNN_METRICS,
    KnnResult,
    knn_baseline,
)
from ._methods import (
    SWEEP_COLUMNS,
    TRAIN_SUMMARY_COLUMNS,
    PrefactorSweep,
    cmd_gen_data,
    cmd_meta,
    cmd_prefactor_sweep,
    cmd_train,
    learnable_spec,
    metric_at,
    package_version,
    run_dir_of,
    save_train_run,
    write_metadata,
)
from ._parallel import (
    ParallelMap,
    run_parallel,
)
from ._presets import (
    PRESETS,
    TRANSFER_SMALL_EXPRESSIONS,
    all_tasks_meta,
    grokking,
    grokking_meta,
    image_regression,
    regression_tiny,
    shortcut,
    staircase,
    tabular,
    transfer_full,
    transfer_small,
)
from ._RunInfo import (
    RunInfo,
)
from ._tasks import (
    build_dataset,
    fit_spec,
)
from ._transfer import (
    SCORE_KINDS,
    TRANSFER_THRESHOLD,
    TransferMatrix,
    cmd_transfer_matrix,
    load_activations,
    normalize_transfer_row,
    slug,
    task_name,
)
