"""Datasets and architectures from task dicts"""
import pathlib

import numpy as np

import libmetaact.tasks as tasks
from libmetaact.experiments._ExperimentConfig import check_task
from libmetaact.metaglobal import ConfigError
from libmetaact.nets import MlpSpec
from libmetaact.tasks import Dataset


def _alg_spec(data: dict) -> tasks.AlgTaskSpec:
    return tasks.AlgTaskSpec.from_dict(data)


def _source(task: dict) -> Dataset:
    t = task["type"]
    seed = task.get("seed", 0)
    if t == "algorithmic":
        return tasks.gen_algorithmic(_alg_spec(task))
    if t == "multitask_algorithmic":
        return tasks.make_multitask_algorithmic(
            [_alg_spec(x) for x in task["tasks"]],
            task_id=task.get("task_id", False),
        )
    if t == "staircase":
        return tasks.make_staircase(
            n_rows=task.get("n_rows", 2000),
            dims=task.get("dims", 2),
            n_thresholds=task.get("n_thresholds", 3),
            seed=seed,
        )
    if t == "abs_regression":
        return tasks.make_abs_regression(
            n_rows=task.get("n_rows", 400),
            low=task.get("low", -2.0),
            high=task.get("high", 2.0),
            seed=seed,
        )
    if t == "blobs":
        return tasks.make_two_blobs(
            n_per_class=task.get("n_per_class", 100),
            dims=task.get("dims", 2),
            margin=task.get("margin", 2.0),
            std=task.get("std", 0.5),
            seed=seed,
        )
    if t == "idx_images":
        ds = tasks.load_idx_images(
            task["images"],
            task["labels"],
            crop=task.get("crop", 0),
            class_count=task.get("class_count"),
        )
        n_rows = task.get("n_rows")
        if n_rows is not None and n_rows < ds.n_rows:
            rng = np.random.default_rng(seed)
            ds = ds.subset(np.sort(rng.choice(ds.n_rows, n_rows, replace=False)))
        return ds
    if t == "collage":
        dsA, dsB = _source(task["a"]), _source(task["b"])
        if "target" in task:
            return tasks.make_collage_meta_dataset(
                dsA,
                dsB,
                target=task["target"],
                seed=seed,
                n_train=task.get("n_train"),
                n_ood=task.get("n_ood"),
            )
        return tasks.make_collage(
            dsA,
            dsB,
            mode=task.get("mode", "ambiguous-train"),
            seed=seed,
            n_rows=task.get("n_rows"),
        )
    raise ConfigError(f"Error in build_dataset: cannot build a '{t}' source")


def build_dataset(task: dict) -> Dataset:
    """Generate or load the dataset of a task dict, with its split

    Keys shared by all task types:

    - "type": one of :data:`TASK_TYPES`
    - "fraction" (0.8): fraction of rows for train + validation
    - "split_seed" (0): split shuffling seed
    - "validation" (True): hold out validation rows
    - "regression" (False): replace class indices by class anchors in [-1, 1]
    - "seed" (0): generation seed of synthetic sources

    Type-specific keys follow the arguments of the generating functions in
    :py:mod:`libmetaact.tasks`: "expression" with "modulus" or "group"
    (algorithmic), "tasks" and "task_id" (multitask_algorithmic), "path" or
    "name" with "data_dir", "label_column", "kind" (tabular_csv), "images",
    "labels", "crop", "class_count", "n_rows" (idx_images), and "a", "b" task
    dicts with "mode", or "target" for the meta-learning variant (collage).

    Collage datasets built with "target" keep their pools; the split is then
    restricted to the "train" pool and the "ood" pool is reserved for
    out-of-distribution episodes.
    """
    check_task(task)
    fraction = task.get("fraction", 0.8)
    split_seed = task.get("split_seed", 0)
    validation = task.get("validation", True)
    if task["type"] == "tabular_csv":
        if "path" in task:
            path = pathlib.Path(task["path"])
        elif task.get("name") in tasks.TABULAR_DATASETS:
            source = tasks.TABULAR_DATASETS[task["name"]]
            path = pathlib.Path(task.get("data_dir", ".")) / source.file_name
        else:
            raise ConfigError(
                "Error in build_dataset: tabular_csv needs 'path' or a known 'name'"
            )
        ds = tasks.load_tabular_csv(
            path,
            label_column=task.get("label_column"),
            kind=task.get("kind", "classification"),
            fraction=fraction,
            seed=split_seed,
            validation=validation,
            normalize=task.get("normalize", True),
        )
    else:
        ds = _source(task)
        rows = ds.pools.get("train") if ds.pools else None
        ds = ds.with_split(
            tasks.split(ds, fraction, seed=split_seed, validation=validation, rows=rows)
        )
    if task.get("regression", False):
        ds = tasks.to_regression(ds)
    return ds


def fit_spec(spec: MlpSpec, dataset: Dataset, **changes) -> MlpSpec:
    """Adapt an architecture to a dataset

    Sets the input width and the head: "logits" with one output per class for
    classification, "regression" with one output otherwise. A single spline
    given for per-layer hidden activations or for input activations is
    repeated to the required count. Other field `changes` (for example
    "hidden" or "activation") are applied first, in the same copy.
    """
    fields = {"activation": spec.activation, "hidden": spec.hidden, "iaf": spec.iaf}
    fields.update(changes)
    if dataset.kind == "classification":
        head, output_dim = "logits", dataset.class_count
    else:
        head, output_dim = "regression", 1
    activation = fields.pop("activation")
    n_layers = len(fields["hidden"])
    per_layer = activation.scope == "per_layer" and n_layers > 0
    if per_layer and activation.count() != n_layers:
        activation = activation.with_splines([activation.splines[0]] * n_layers)
    iaf = fields.pop("iaf")
    if iaf is not None and iaf.count() != dataset.input_dim:
        iaf = iaf.with_splines([iaf.splines[0]] * dataset.input_dim)
    return spec.replace(
        input_dim=dataset.input_dim,
        output_dim=output_dim,
        head=head,
        activation=activation,
        iaf=iaf,
        **fields,
    )
