"""Datasets: generation, loading, and splitting

The :py:mod:`libmetaact.tasks` module provides:

- :class:`Dataset` and :class:`SplitSpec`
- Algorithmic tasks (modular arithmetic and symmetric group operations) used to
  study grokking, :func:`gen_algorithmic` and :data:`ALGORITHMIC_TASKS`
- Collages combining tiles of two image datasets, for shortcut learning
- Tabular CSV and IDX image loaders
- Synthetic generators: staircase, two blobs, ``|x|`` regression

"""
from ._algorithmic import (
    ALGORITHMIC_TASKS,
    EXPRESSIONS,
    GROUP_OPS,
    GROUPS,
    AlgTaskSpec,
    compose,
    decode_operands,
    gen_algorithmic,
    inverse,
    make_multitask_algorithmic,
    operation_table,
    permutations,
)
from ._collage import (
    COLLAGE_MODES,
    make_collage,
    make_collage_meta_dataset,
)
from ._Dataset import (
    DATASET_KINDS,
    Dataset,
    SplitSpec,
)
from ._idx import (
    IMAGES_MAGIC,
    LABELS_MAGIC,
    load_idx_images,
    read_idx,
    write_idx,
)
from ._methods import (
    regression_targets,
    split,
    to_regression,
)
from ._synthetic import (
    make_abs_regression,
    make_staircase,
    make_two_blobs,
)
from ._tabular import (
    TABULAR_DATASETS,
    RangeNormalizer,
    TabularSource,
    dataset_to_csv,
    load_tabular_csv,
)
