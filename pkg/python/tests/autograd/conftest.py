import numpy as np
import pytest

import libmetaact.autograd as ag


def _scalar_fn(build):
    """Wrap ``build(trace, x_var) -> Var`` as ``f(x) -> float`` (sum of output)"""

    def f(x):
        trace = ag.Trace()
        out = build(trace, trace.leaf(x, "x"))
        return float(np.sum(out.value))

    return f


@pytest.fixture
def check_gradient(central_difference):
    """Compare the gradient of ``sum(build(x))`` with finite differences"""

    def check(build, x, rtol=1e-4, atol=1e-7, eps=1e-5):
        trace = ag.Trace()
        xv = trace.leaf(x, "x")
        out = build(trace, xv)
        (g,) = ag.grad(out, [xv], seed=np.ones(out.shape))
        fd = central_difference(_scalar_fn(build), x, eps=eps)
        np.testing.assert_allclose(g, fd, rtol=rtol, atol=atol)
        return g

    return check


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
