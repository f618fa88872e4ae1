import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import Pipeline

from leplab import ExampleSemigroup, Grid, Localizer, PolyharmonicFlow
from leplab._validation import GridMismatchError
from leplab.profiles import random_signed_battery

G = Grid(20.0, 801)

ESTIMATORS = [
    ExampleSemigroup(t=1.5),
    Localizer(n=3, kind="urysohn"),
    PolyharmonicFlow(alpha=1.0, half_width=20.0, num_points=256, t=0.5),
]


@pytest.mark.parametrize("est", ESTIMATORS, ids=lambda e: type(e).__name__)
def test_params_round_trip(est):
    params = est.get_params()
    twin = clone(est)
    assert twin.get_params() == params
    assert twin is not est
    twin.set_params(t=2.0) if "t" in params else twin.set_params(n=4)
    assert twin.get_params() != params


@pytest.mark.parametrize("est", ESTIMATORS, ids=lambda e: type(e).__name__)
def test_unfitted_transform_raises(est):
    with pytest.raises(NotFittedError):
        clone(est).transform(np.zeros(5))


def test_pipeline_on_sample_arrays(rng):
    X = np.stack([G.sample(p).values for p in random_signed_battery(rng, 4)])
    pipe = Pipeline([("evolve", ExampleSemigroup(t=3.0, half_width=20.0)), ("window", Localizer(5, half_width=20.0))])
    out = pipe.fit(X).transform(X)
    T = ExampleSemigroup().fit(G)
    P = Localizer(5).fit(G)
    for row, x in zip(out, X):
        f = G.zeros().with_values(x)
        np.testing.assert_array_equal(row, P.transform(T.evolve(f, 3.0)).values)


def test_grid_mismatch_on_transform():
    T = ExampleSemigroup().fit(G)
    with pytest.raises(GridMismatchError):
        T.transform(Grid(20.0, 401).zeros())
    with pytest.raises(ValueError):
        T.transform(np.zeros(401))


def test_repr_shows_params():
    assert "kind='urysohn'" in repr(Localizer(n=3, kind="urysohn"))
