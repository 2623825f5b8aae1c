"""Meta-learning activation functions

The :py:mod:`libmetaact.metalearn` module provides the outer loop of the
bi-level optimization of spline activation functions:

- :class:`Episode` and :func:`sample_episode`: a fresh weight initialization
  and fresh training / validation subsets per outer step, with optional
  out-of-distribution validation subsets
- :func:`meta_learn`: progressively longer inner loops, truncated second-order
  meta-gradients, and early stopping on the retrained validation score
- :func:`restart_search`: restarts over a :class:`RestartGrid`, keeping the
  activations that retrain best

"""
from ._Episode import (
    Episode,
    sample_episode,
    training_pool,
)
from ._io import (
    save_meta_result,
    write_meta_log,
    write_restart_log,
)
from ._MetaConfig import (
    EPISODE_TAGS,
    MAX_EPISODE_TRAIN,
    MAX_EPISODE_VAL,
    OBJECTIVES,
    RESTART_BOUNDS,
    EpisodeSampler,
    MetaConfig,
    RestartGrid,
)
from ._methods import (
    META_LOG_COLUMNS,
    RESTART_LOG_COLUMNS,
    MetaResult,
    RestartResult,
    learned_params,
    mean_restart_score,
    meta_learn,
    outer_objective,
    prepare_spec,
    restart_search,
    run_restart,
)
