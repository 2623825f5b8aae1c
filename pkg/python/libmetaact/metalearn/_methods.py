import dataclasses
import logging
from typing import Callable, Optional

import numpy as np
import pandas as pd

import libmetaact.autograd as ag
from libmetaact.metaglobal import ConfigError, DivergenceError
from libmetaact.metalearn._Episode import Episode, sample_episode
from libmetaact.metalearn._MetaConfig import MetaConfig, RestartGrid
from libmetaact.nets import (
    ActivationParams,
    MlpSpec,
    activation_params,
    build_forward,
    init_params,
    with_activation_params,
)
from libmetaact.splines import (
    ActivationBinding,
    SplineActivation,
    init_spline,
    resample_spline,
)
from libmetaact.tasks import Dataset
from libmetaact.training import build_loss, loss_targets, retrain_score

logger = logging.getLogger(__name__)

META_LOG_COLUMNS = [
    "outer_step",
    "n_tr",
    "episode_seed",
    "outer_loss",
    "retrain_val_acc",
]
"""Columns of the meta-learning log, in order"""

RESTART_LOG_COLUMNS = [
    "restart",
    "seed",
    "outer_lr",
    "n_c",
    "t",
    "init",
    "score",
    "discarded",
]
"""Columns of the restart log, in order"""

MAX_DISCARDED_FRACTION = 0.25
MIN_EPISODES_BEFORE_ABORT = 4


def prepare_spec(spec: MlpSpec, config: MetaConfig) -> MlpSpec:
    """Apply the spline initialization of `config` to the hidden-layer splines

    With ``config.init`` set, splines are re-initialized; otherwise the
    existing control values are kept, resampled if ``config.n_c`` differs.
    """
    act = spec.activation
    if act.kind != "spline":
        return spec
    splines = []
    for s in act.splines:
        n_c = config.n_c if config.n_c is not None else s.n_c
        mode = config.mode if config.mode is not None else s.mode
        if config.init is not None:
            splines.append(init_spline(config.init, n_c=n_c, a=s.a, b=s.b, mode=mode))
        else:
            base = s if n_c == s.n_c else resample_spline(s, n_c)
            splines.append(SplineActivation(base.psi, a=s.a, b=s.b, mode=mode))
    return spec.replace(activation=act.with_splines(splines))


def learned_params(spec: MlpSpec, config: MetaConfig) -> ActivationParams:
    """The activation parameters updated by meta-learning"""
    psi = {}
    for key, value in activation_params(spec).items():
        if key == "iaf" and config.learn_iaf:
            psi[key] = value
        elif key != "iaf" and config.learn_hidden:
            psi[key] = value
    if not psi:
        raise ConfigError(
            "Error in meta_learn: the architecture has no learnable spline activations"
        )
    return psi


def _loss_fn(
    spec: MlpSpec,
    dataset: Dataset,
    rows: np.ndarray,
    kind: str,
) -> ag.LossFn:
    X = dataset.X[rows]
    targets = loss_targets(spec, dataset, rows)

    def loss_fn(trace: ag.Trace, theta: dict, psi: dict) -> ag.Var:
        out = build_forward(trace, spec, theta, trace.constant(X), psi)
        return build_loss(out, targets, kind)

    return loss_fn


def outer_objective(
    spec: MlpSpec,
    dataset: Dataset,
    episode: Episode,
    tag: str,
    kind: str,
    allow_test_cheat: bool = False,
) -> ag.LossFn:
    """The outer loss of an episode

    Parameters
    ----------
    spec: MlpSpec
        The architecture.
    dataset: Dataset
        The data.
    episode: Episode
        The episode.
    tag: str
        "validation" (loss on ``episode.val_rows``), "train" (loss on
        ``episode.train_rows``), or "test-cheat" (loss on the test split).
    kind: str
        "ce" or "mse".
    allow_test_cheat: bool = False
        Must be True for ``tag="test-cheat"``.

    Returns
    -------
    loss_fn: libmetaact.autograd.LossFn
        Records the loss on a trace, given parameter and activation nodes.
    """
    if tag == "validation":
        rows = episode.val_rows
    elif tag == "train":
        rows = episode.train_rows
    elif tag == "test-cheat":
        if not allow_test_cheat:
            raise ConfigError(
                "Error in outer_objective: 'test-cheat' requires allow_test_cheat"
            )
        if dataset.split is None:
            raise ConfigError("Error in outer_objective: dataset has no split")
        rows = dataset.split.test
    else:
        raise ConfigError(f"Error in outer_objective: invalid tag '{tag}'")
    if rows.size == 0:
        raise ConfigError(f"Error in outer_objective: no rows for '{tag}'")
    return _loss_fn(spec, dataset, rows, kind)


@dataclasses.dataclass
class MetaResult:
    """Outcome of :func:`meta_learn`

    Attributes
    ----------
    spec: MlpSpec
        The architecture with the best activation functions.
    psi: ActivationParams
        The best learned activation parameters.
    best_score: float
        Retraining score of `psi` (validation accuracy, or minus the
        validation loss for datasets without class anchors).
    best_step: int
        Outer step that produced `psi`; 0 for the initialization.
    log: pandas.DataFrame
        One row per completed outer step, columns :data:`META_LOG_COLUMNS`.
    discarded: int
        Number of diverged episodes.
    config: MetaConfig
        The settings used.
    """

    spec: MlpSpec
    psi: ActivationParams
    best_score: float
    best_step: int
    log: pd.DataFrame
    discarded: int
    config: MetaConfig

    @property
    def hidden(self) -> ActivationBinding:
        return self.spec.activation

    @property
    def iaf(self) -> Optional[ActivationBinding]:
        return self.spec.iaf

    @property
    def spline(self) -> SplineActivation:
        """The first learned spline: the shared or first per-layer hidden
        activation, else the first input activation"""
        if self.spec.activation.kind == "spline":
            return self.spec.activation.splines[0]
        return self.spec.iaf.splines[0]


def _episode_seed(seed: int, step: int) -> int:
    return int(np.random.SeedSequence((seed, step)).generate_state(1)[0])


def _score(spec: MlpSpec, dataset: Dataset, config: MetaConfig, psi) -> float:
    try:
        return retrain_score(spec, dataset, config.retrain, psi=psi)
    except DivergenceError as e:
        logger.warning("retraining diverged at step %d", e.step)
        return float("nan")


def _all_finite(arrays) -> bool:
    return all(np.all(np.isfinite(a)) for a in arrays)


def _run_episode(window, inner, outer, theta, psi, n_tr, t, lr):
    """Unrolled inner steps and the meta-gradient; None if anything is
    non-finite"""
    with np.errstate(all="ignore"):
        try:
            for _ in range(n_tr):
                theta, value = window.step(inner, theta, psi, lr)
                if not np.isfinite(value) or not _all_finite(theta.values()):
                    return None
            outer_loss, grads = ag.meta_backward(window, outer, theta, psi, t=t)
        except (FloatingPointError, np.linalg.LinAlgError):
            return None
    if not np.isfinite(outer_loss) or not _all_finite(grads.values()):
        return None
    return (outer_loss, grads)


def meta_learn(
    dataset: Dataset,
    spec: MlpSpec,
    config: MetaConfig,
) -> MetaResult:
    """Meta-learn spline activation functions by bi-level optimization

    Outer step ``k = 1, 2, ...`` samples a fresh :class:`Episode`, trains the
    network from the episode's initial weights for ``n_tr = min(k,
    config.inner_ceiling)`` plain gradient descent steps on the episode
    training rows with the activations fixed, and evaluates the outer loss
    (see :func:`outer_objective`). The activation parameters take one gradient
    step on the outer loss, differentiated through the last ``min(t, n_tr)``
    inner steps (:func:`libmetaact.autograd.meta_backward`).

    After every `eval_every` outer steps the activations are scored by
    retraining a network from scratch (``config.retrain``) and reading the
    validation score of its best checkpoint. The best scoring activations are
    returned; the loop stops after `patience` scored steps without
    improvement.

    Episodes whose inner loss, weights, outer loss or meta-gradient become
    non-finite are discarded. If more than
    25% of at least 4 episodes are discarded, the run is aborted.

    Parameters
    ----------
    dataset: Dataset
        The data, with a split; episodes draw from the training split and
        retraining selects on the validation split.
    spec: MlpSpec
        The architecture, with spline hidden activations and/or input
        activation functions.
    config: MetaConfig
        The settings.

    Returns
    -------
    result: MetaResult
        The best activations and the run log.

    Raises
    ------
    libmetaact.metaglobal.DivergenceError
        If too many episodes diverge.
    """
    if dataset.split is None:
        raise ConfigError("Error in meta_learn: dataset has no split")
    spec = prepare_spec(spec, config)
    psi = learned_params(spec, config)
    kind = config.retrain.loss_kind(spec.head)
    logger.info(
        "meta-learning %s for up to %d outer steps, t=%d, outer_lr=%g",
        sorted(psi),
        config.n_tr_max,
        config.t,
        config.outer_lr,
    )

    best_psi = {k: v.copy() for k, v in psi.items()}
    best_score = _score(spec, dataset, config, psi)
    best_step = 0
    since_best = 0
    discarded = 0
    attempted = 0
    rows = []
    for k in range(1, config.n_tr_max + 1):
        n_tr = min(k, config.inner_ceiling)
        seed = _episode_seed(config.seed, k)
        episode = sample_episode(dataset, config.sampler, seed)
        attempted += 1
        inner = _loss_fn(spec, dataset, episode.train_rows, kind)
        outer = outer_objective(
            spec,
            dataset,
            episode,
            config.objective,
            kind,
            allow_test_cheat=config.allow_test_cheat,
        )
        t = min(config.t, n_tr)
        window = ag.UnrolledWindow(t)
        theta = init_params(spec, episode.weight_seed).as_dict()
        episode_out = _run_episode(
            window, inner, outer, theta, psi, n_tr, t, config.inner_lr
        )
        if episode_out is None:
            discarded += 1
            logger.warning("outer step %d: episode %d diverged, discarded", k, seed)
            if (
                attempted >= MIN_EPISODES_BEFORE_ABORT
                and discarded > MAX_DISCARDED_FRACTION * attempted
            ):
                raise DivergenceError(
                    f"Error in meta_learn: {discarded} of {attempted} episodes "
                    "diverged",
                    k,
                )
            continue

        outer_loss, grads = episode_out
        psi = {key: psi[key] - config.outer_lr * grads[key] for key in psi}
        score = float("nan")
        if k % config.eval_every == 0:
            score = _score(spec, dataset, config, psi)
            if score > best_score or (np.isnan(best_score) and not np.isnan(score)):
                best_psi = {key: v.copy() for key, v in psi.items()}
                best_score, best_step, since_best = score, k, 0
            else:
                since_best += 1
        rows.append(
            {
                "outer_step": k,
                "n_tr": n_tr,
                "episode_seed": seed,
                "outer_loss": outer_loss,
                "retrain_val_acc": score,
            }
        )
        logger.debug(
            "outer step %d: n_tr=%d outer_loss=%.6g score=%.4f",
            k,
            n_tr,
            outer_loss,
            score,
        )
        if config.patience and since_best >= config.patience:
            logger.info("early stop after outer step %d", k)
            break

    logger.info(
        "meta-learning done: best score %.4f at outer step %d, %d discarded",
        best_score,
        best_step,
        discarded,
    )
    return MetaResult(
        spec=with_activation_params(spec, best_psi),
        psi=best_psi,
        best_score=best_score,
        best_step=best_step,
        log=pd.DataFrame.from_records(rows, columns=META_LOG_COLUMNS),
        discarded=discarded,
        config=config,
    )


@dataclasses.dataclass
class RestartResult:
    """Outcome of :func:`restart_search`

    Attributes
    ----------
    best: MetaResult
        The meta-learning run whose activations retrained best.
    best_index: int
        Grid position of `best`.
    scores: list[float]
        Retraining score per grid point; NaN for diverged runs.
    results: list[Optional[MetaResult]]
        Every run, None for diverged ones.
    log: pandas.DataFrame
        One row per grid point, columns :data:`RESTART_LOG_COLUMNS`.
    """

    best: MetaResult
    best_index: int
    scores: list
    results: list
    log: pd.DataFrame


def run_restart(args: tuple) -> Optional[MetaResult]:
    """Run one restart, ``args = (dataset, spec, config)``; None if it
    diverged"""
    dataset, spec, config = args
    try:
        return meta_learn(dataset, spec, config)
    except DivergenceError as e:
        logger.warning("restart with seed %d diverged: %s", config.seed, e)
        return None


def restart_search(
    dataset: Dataset,
    spec: MlpSpec,
    grid: RestartGrid,
    base: Optional[MetaConfig] = None,
    mapper: Optional[Callable] = None,
) -> RestartResult:
    """Meta-learn with restarts and keep the activations that retrain best

    Each grid point runs :func:`meta_learn`. Each run is scored by the
    ``best_score`` it already computed, the validation score of the best
    checkpoint of a network retrained from scratch with its activations
    (``base.retrain``, shared by all grid points). The highest score
    wins; ties go to the first point in grid order.

    Parameters
    ----------
    dataset: Dataset
        The data, with a split.
    spec: MlpSpec
        The architecture.
    grid: RestartGrid
        The restart hyperparameters.
    base: Optional[MetaConfig] = None
        Settings shared by all restarts. Default is ``MetaConfig()``.
    mapper: Optional[Callable] = None
        ``mapper(fn, items) -> list`` running the restarts, for example a
        parallel map. Default runs them in order.

    Returns
    -------
    result: RestartResult
        The best run and all scores.

    Raises
    ------
    libmetaact.metaglobal.DivergenceError
        If every restart diverged.
    """
    base = base if base is not None else MetaConfig()
    points = grid.points(base)
    items = [(dataset, spec, config) for config in points]
    if mapper is None:
        results = [run_restart(item) for item in items]
    else:
        results = list(mapper(run_restart, items))

    scores = []
    for result in results:
        if result is None:
            scores.append(float("nan"))
        else:
            scores.append(result.best_score)
    finite = [i for i, s in enumerate(scores) if not np.isnan(s)]
    if not finite:
        raise DivergenceError("Error in restart_search: all candidates diverged", 0)
    best_index = finite[0]
    for i in finite[1:]:
        if scores[i] > scores[best_index]:
            best_index = i

    log = pd.DataFrame.from_records(
        [
            {
                "restart": i,
                "seed": config.seed,
                "outer_lr": config.outer_lr,
                "n_c": config.n_c,
                "t": config.t,
                "init": config.init,
                "score": scores[i],
                "discarded": -1 if results[i] is None else results[i].discarded,
            }
            for i, config in enumerate(points)
        ],
        columns=RESTART_LOG_COLUMNS,
    )
    logger.info(
        "restart search: best restart %d of %d, score %.4f",
        best_index,
        len(points),
        scores[best_index],
    )
    return RestartResult(
        best=results[best_index],
        best_index=best_index,
        scores=scores,
        results=results,
        log=log,
    )


def mean_restart_score(result: RestartResult) -> float:
    """Mean retraining score over the restarts that did not diverge"""
    return float(np.nanmean(np.asarray(result.scores, dtype=np.float64)))
