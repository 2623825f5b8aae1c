"""Named experiment configurations"""
from typing import Callable, Optional

from libmetaact.experiments._ExperimentConfig import ExperimentConfig
from libmetaact.experiments._transfer import slug, task_name
from libmetaact.metalearn import EpisodeSampler, MetaConfig, RestartGrid
from libmetaact.nets import MlpSpec
from libmetaact.splines import ActivationBinding, init_spline, spline_binding
from libmetaact.tasks import ALGORITHMIC_TASKS
from libmetaact.training import TrainConfig

TRANSFER_SMALL_EXPRESSIONS = ("a+b", "a-b", "a*b", "a^2+b^2", "a^2+ab+b^2", "a^3+ab")
"""Modular expressions of the small transfer matrix, all mod 27"""


def _mlp(hidden: tuple, **kwargs) -> MlpSpec:
    # input and output widths are set from the dataset
    return MlpSpec(input_dim=1, hidden=hidden, output_dim=1, **kwargs)


def _identity_iaf() -> ActivationBinding:
    return spline_binding(
        [init_spline("identity", n_c=50, a=-1.0, b=1.0)], scope="per_input"
    )


def _grokking_train(max_steps: int = 60000) -> TrainConfig:
    return TrainConfig(
        optimizer="gd",
        lr=1.0,
        batch_size=4096,
        max_steps=max_steps,
        swa_window=0,
        loss="mse",
    )


def grokking(expression: str = "a+b", modulus: int = 13) -> ExperimentConfig:
    """Delayed generalization on modular arithmetic

    One hidden layer of width 256, MSE loss on one-hot targets, full-batch
    gradient descent with learning rate 1.0, up to 60000 steps, 80/20 split.
    """
    return ExperimentConfig(
        task={
            "type": "algorithmic",
            "expression": expression,
            "modulus": modulus,
            "fraction": 0.8,
            "validation": False,
        },
        model=_mlp((256,)),
        train=_grokking_train(),
        output_dir=f"results/grokking/{slug(f'{expression} mod {modulus}')}",
    )


def grokking_meta(expression: str = "a+b", modulus: int = 27) -> ExperimentConfig:
    """Meta-learn a hidden activation for a modular arithmetic task

    As :func:`grokking`, with validation rows for scoring, and a restart grid
    of 4 points (2 seeds, 2 outer learning rates) from a ReLU-shaped spline.
    """
    retrain = _grokking_train(max_steps=3000)
    name = slug(f"{expression} mod {modulus}")
    return ExperimentConfig(
        task={
            "type": "algorithmic",
            "expression": expression,
            "modulus": modulus,
            "fraction": 0.8,
            "validation": True,
        },
        model=_mlp((256,)),
        train=_grokking_train(),
        meta=MetaConfig(
            n_tr_max=100,
            outer_lr=0.05,
            t=5,
            inner_lr=1.0,
            inner_ceiling=500,
            init="relu",
            n_c=100,
            retrain=retrain,
        ),
        restarts=RestartGrid(
            seeds=(0, 1), outer_lrs=(0.05, 0.1), n_cs=(100,), ts=(5,), inits=("relu",)
        ),
        output_dir=f"results/meta/{name}",
    )


def tabular(
    path: str = "data/tabular.csv", label_column: Optional[str] = None
) -> ExperimentConfig:
    """Tabular classification with input activation functions

    RMSprop with mini-batches of 4096, hidden width 256, depths 1 to 4,
    identity-initialized IAFs on [-1, 1], and a ``tanh(alpha * x)`` prefactor
    grid in [0.01, 8].
    """
    return ExperimentConfig(
        task={"type": "tabular_csv", "path": path, "label_column": label_column},
        model=_mlp((256,), iaf=_identity_iaf()),
        train=TrainConfig(
            optimizer="rmsprop", lr=1e-3, batch_size=4096, max_steps=2000
        ),
        meta=MetaConfig(
            n_tr_max=100,
            outer_lr=0.05,
            t=5,
            inner_lr=0.1,
            learn_hidden=False,
            learn_iaf=True,
            retrain=TrainConfig(
                optimizer="rmsprop", lr=1e-3, batch_size=4096, max_steps=500
            ),
        ),
        hidden_sweep=((256,), (256, 256), (256, 256, 256), (256, 256, 256, 256)),
        alphas=(0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0),
        output_dir="results/tabular",
    )


def shortcut(
    images_a: str = "data/mnist/train-images-idx3-ubyte",
    labels_a: str = "data/mnist/train-labels-idx1-ubyte",
    images_b: str = "data/fashion/train-images-idx3-ubyte",
    labels_b: str = "data/fashion/train-labels-idx1-ubyte",
    target: str = "A",
) -> ExperimentConfig:
    """Shortcut learning on two-tile collages

    One hidden layer of width 32, learning rate 0.01, spectral normalization.
    Meta-learning validates on tile-specific collages (the "ood" pool).
    """
    train = TrainConfig(optimizer="rmsprop", lr=0.01, batch_size=4096, max_steps=2000)
    return ExperimentConfig(
        task={
            "type": "collage",
            "a": {"type": "idx_images", "images": images_a, "labels": labels_a},
            "b": {"type": "idx_images", "images": images_b, "labels": labels_b},
            "target": target,
            "n_train": 10000,
            "n_ood": 2000,
        },
        model=_mlp((32,), spectral_norm=True),
        train=train,
        meta=MetaConfig(
            init="relu",
            n_c=100,
            sampler=EpisodeSampler(tag="ood"),
            retrain=train.replace(max_steps=500),
        ),
        output_dir=f"results/shortcut/{target}",
    )


def image_regression(
    images: str = "data/mnist/train-images-idx3-ubyte",
    labels: str = "data/mnist/train-labels-idx1-ubyte",
    n_rows: int = 10000,
) -> ExperimentConfig:
    """Image classification as regression on class anchors

    A 10000-row subset, 3 hidden layers of width 256, 5 seeds; meta-learning
    starts from a zero activation.
    """
    train = TrainConfig(optimizer="rmsprop", lr=1e-3, batch_size=4096, max_steps=3000)
    return ExperimentConfig(
        task={
            "type": "idx_images",
            "images": images,
            "labels": labels,
            "n_rows": n_rows,
            "regression": True,
        },
        model=_mlp((256, 256, 256)),
        train=train,
        meta=MetaConfig(init="zeros", n_c=100, retrain=train.replace(max_steps=500)),
        seeds=(0, 1, 2, 3, 4),
        output_dir="results/image_regression",
    )


def regression_tiny() -> ExperimentConfig:
    """A small regression-on-anchors task for ablations of the meta-learning
    settings"""
    train = TrainConfig(optimizer="rmsprop", lr=0.01, batch_size=4096, max_steps=300)
    return ExperimentConfig(
        task={"type": "staircase", "n_rows": 400, "regression": True},
        model=_mlp((32,)),
        train=train,
        meta=MetaConfig(
            n_tr_max=20,
            outer_lr=0.05,
            t=3,
            inner_lr=0.1,
            inner_ceiling=100,
            init="zeros",
            n_c=50,
            patience=5,
            retrain=train,
        ),
        output_dir="results/regression_tiny",
    )


def staircase() -> ExperimentConfig:
    """Axis-aligned staircase classification with meta-learned input
    activation functions, 5 seeds"""
    train = TrainConfig(optimizer="rmsprop", lr=1e-3, batch_size=4096, max_steps=3000)
    return ExperimentConfig(
        task={"type": "staircase", "n_rows": 2000},
        model=_mlp((64, 64), iaf=_identity_iaf()),
        train=train,
        meta=MetaConfig(
            learn_hidden=False,
            learn_iaf=True,
            retrain=train.replace(max_steps=1000),
        ),
        seeds=(0, 1, 2, 3, 4),
        alphas=(0.5, 1.0, 2.0, 4.0, 8.0),
        output_dir="results/staircase",
    )


def _transfer(tasks: list[dict], activation_dir: str, out: str) -> ExperimentConfig:
    names = [task_name(t) for t in tasks]
    return ExperimentConfig(
        task=tasks[0],
        model=_mlp((256,)),
        train=_grokking_train(max_steps=10000),
        transfer_tasks=tuple(tasks),
        activations={
            name: f"{activation_dir}/{slug(name)}/spline.json" for name in names
        },
        output_dir=out,
    )


def _alg_task(data: dict) -> dict:
    return {"type": "algorithmic", **data, "fraction": 0.8, "validation": False}


def transfer_small(activation_dir: str = "results/meta") -> ExperimentConfig:
    """Transfer matrix of 6 modular tasks mod 27

    Columns are each task's activation, read from
    ``<activation_dir>/<task>/spline.json``, and ReLU.
    """
    tasks = [
        _alg_task({"expression": e, "modulus": 27}) for e in TRANSFER_SMALL_EXPRESSIONS
    ]
    return _transfer(tasks, activation_dir, "results/transfer_small")


def transfer_full(activation_dir: str = "results/meta") -> ExperimentConfig:
    """Transfer matrix of the 22 algorithmic tasks

    Columns are each task's activation, ReLU, and an activation learned on all
    tasks together (``<activation_dir>/all_tasks/spline.json``).
    """
    tasks = [_alg_task(spec.to_dict()) for spec in ALGORITHMIC_TASKS]
    config = _transfer(tasks, activation_dir, "results/transfer_full")
    activations = dict(config.activations)
    activations["relu"] = None
    activations["all tasks"] = f"{activation_dir}/all_tasks/spline.json"
    return config.replace(activations=activations)


def all_tasks_meta(task_id: bool = True) -> ExperimentConfig:
    """Meta-learn one activation on all 22 algorithmic tasks together

    With `task_id`, a one-hot task index is appended to the operands.
    """
    config = grokking_meta()
    return config.replace(
        task={
            "type": "multitask_algorithmic",
            "tasks": [spec.to_dict() for spec in ALGORITHMIC_TASKS],
            "task_id": task_id,
            "fraction": 0.8,
            "validation": True,
        },
        output_dir="results/meta/all_tasks",
    )


PRESETS: dict[str, Callable[[], ExperimentConfig]] = {
    "grokking": grokking,
    "grokking_meta": grokking_meta,
    "all_tasks_meta": all_tasks_meta,
    "tabular": tabular,
    "shortcut": shortcut,
    "image_regression": image_regression,
    "regression_tiny": regression_tiny,
    "staircase": staircase,
    "transfer_small": transfer_small,
    "transfer_full": transfer_full,
}
"""Preset configurations by name; every function has defaults for all
arguments"""
