import numpy as np
import pytest

import libmetaact.metalearn as metalearn
import libmetaact.tasks as tasks
from libmetaact.metaglobal import ConfigError


def _plain(n_rows):
    return tasks.Dataset(X=np.zeros((n_rows, 1)), y=np.zeros(n_rows), class_count=1)


def test_episode_sizes_and_disjoint():
    sampler = metalearn.EpisodeSampler(train_size=100, val_size=50)
    episode = metalearn.sample_episode(_plain(200), sampler, seed=1)
    assert episode.train_rows.size == 100
    assert episode.val_rows.size == 50
    assert np.intersect1d(episode.train_rows, episode.val_rows).size == 0
    assert episode.tag == "in-distribution"


def test_episode_seeds_differ():
    sampler = metalearn.EpisodeSampler(train_size=10, val_size=5)
    a = metalearn.sample_episode(_plain(50), sampler, seed=1)
    b = metalearn.sample_episode(_plain(50), sampler, seed=2)
    assert a.weight_seed != b.weight_seed
    again = metalearn.sample_episode(_plain(50), sampler, seed=1)
    assert again.weight_seed == a.weight_seed
    assert np.array_equal(again.train_rows, a.train_rows)


def test_default_sizes():
    episode = metalearn.sample_episode(_plain(100), metalearn.EpisodeSampler(), 0)
    assert episode.train_rows.size == 80
    assert episode.val_rows.size == 20


def test_episode_too_large():
    sampler = metalearn.EpisodeSampler(train_size=150, val_size=60)
    with pytest.raises(ConfigError):
        metalearn.sample_episode(_plain(200), sampler, seed=0)


def test_episode_overlap_rejected():
    with pytest.raises(ConfigError):
        metalearn.Episode(weight_seed=0, train_rows=[1, 2], val_rows=[2, 3])


def test_pool_uses_training_split():
    ds = _plain(100)
    ds = ds.with_split(tasks.split(ds, 0.8, seed=0, validation=True))
    pool = metalearn.training_pool(ds)
    assert np.array_equal(pool, ds.split.train)
    episode = metalearn.sample_episode(ds, metalearn.EpisodeSampler(), seed=3)
    assert np.isin(episode.train_rows, ds.split.train).all()
    assert np.isin(episode.val_rows, ds.split.train).all()


def test_ood_episode_from_collage():
    rng = np.random.default_rng(0)
    y = rng.integers(0, 3, size=60)
    src = tasks.Dataset(X=np.eye(3)[y], y=y, class_count=3)
    ds = tasks.make_collage_meta_dataset(src, src, target="A", n_train=40, n_ood=30)
    sampler = metalearn.EpisodeSampler(train_size=30, val_size=20, tag="ood")
    episode = metalearn.sample_episode(ds, sampler, seed=5)
    assert episode.tag == "ood"
    assert np.isin(episode.val_rows, ds.pools["ood"]).all()
    assert np.isin(episode.train_rows, ds.pools["train"]).all()
    with pytest.raises(ConfigError):
        metalearn.sample_episode(_plain(50), sampler, seed=0)
