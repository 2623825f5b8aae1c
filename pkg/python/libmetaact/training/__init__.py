"""Inner-loop training with fixed activation functions

The :py:mod:`libmetaact.training` module provides:

- :class:`TrainConfig`, optimizer settings (gradient descent or RMSprop,
  minibatches, stochastic weight averaging)
- :func:`train`, returning final and best-validation parameters, a
  :class:`Trajectory` of parameter snapshots, and a metrics table
- Losses (softmax cross-entropy, MSE) and accuracies for the logits and
  regression heads
- Convergence measures: :func:`steps_to_accuracy`, :func:`grokking_delay`

"""
from ._io import (
    load_trajectory,
    read_metrics_csv,
    save_trajectory,
    write_metrics_csv,
)
from ._methods import (
    METRICS_COLUMNS,
    accuracy,
    build_loss,
    evaluate,
    grokking_delay,
    loss,
    loss_targets,
    mean_params,
    steps_to_accuracy,
    swa_average,
)
from ._train import (
    TrainResult,
    loss_and_grad,
    retrain_score,
    train,
)
from ._TrainConfig import (
    LOSSES,
    MAX_SNAPSHOTS,
    OPTIMIZERS,
    RMSPROP_DECAY,
    RMSPROP_EPS,
    TrainConfig,
    snapshot_interval,
)
from ._Trajectory import (
    Trajectory,
)
