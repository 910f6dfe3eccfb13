import io
import logging
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hkl.errors import InvalidParameter, NewtonDivergence, StepUnderflow
from hkl.misc.counter import Counter, Evaluations
from hkl.temporal import (DOPRI5, ButcherTableau, dopri5, dopri5_steps, implicit_midpoint, implicit_midpoint_4,
                          midpoint_step, rk_4, rk_butcher)

ROTATION = np.array([[0., 1.], [-1., 0.]])


def oscillator(y, t):
    return ROTATION @ y


def oscillator_jac(y, t):
    return ROTATION


def oscillator_error(method, dt, t_final=1.):
    t = np.linspace(0., t_final, int(round(t_final / dt)) + 1)
    y = method(np.array([1., 0.]), t, oscillator, verbose=False, jac=oscillator_jac)
    exact = np.column_stack((np.cos(t), -np.sin(t)))
    return np.max(np.abs(y - exact))


@pytest.mark.parametrize('method, order', [(implicit_midpoint, 2), (implicit_midpoint_4, 4), (rk_4, 4)])
def test_convergence_order(method, order):
    coarse, fine = oscillator_error(method, .1), oscillator_error(method, .05)
    assert math.log2(coarse / fine) == pytest.approx(order, abs=.3)


def test_midpoint_keeps_quadratic_invariants():
    t = np.linspace(0., 100., 1001)
    y = implicit_midpoint(np.array([1., 0.]), t, oscillator, verbose=False, jac=oscillator_jac)
    assert_allclose(np.sum(y * y, axis=1), 1., atol=1e-10)
    y = implicit_midpoint(np.array([1., 0.]), t, oscillator, verbose=False)
    assert_allclose(np.sum(y * y, axis=1), 1., atol=1e-10)


def test_midpoint_is_symmetric():
    f = lambda y, t: np.array([y[1], -np.sin(y[0])])
    y0 = np.array([1., .3])
    y1 = midpoint_step(y0, 0., .1, f)
    assert_allclose(midpoint_step(y1, .1, -.1, f), y0, atol=1e-12)
    assert_allclose(midpoint_step(y0, 0., 0., f), y0)


def test_newton_divergence():
    f = lambda y, t: y * y
    with np.errstate(over='ignore', invalid='ignore'):
        with pytest.raises(NewtonDivergence) as info:
            midpoint_step(np.array([1.]), 0., 10., f)
    assert info.value.dt == 10.


def test_rk_butcher_euler():
    euler = rk_butcher(np.array([[0.]]), np.array([1.]))
    t = np.linspace(0., 1., 11)
    y = euler(np.array([1.]), t, lambda y, t: y, verbose=False)
    assert_allclose(y[:, 0], 1.1 ** np.arange(11))


def test_dopri5():
    t = np.linspace(0., 2., 5)
    y = dopri5(np.array([1., 0.]), t, oscillator, verbose=False, rtol=1e-11, atol=1e-13)
    assert_allclose(y, np.column_stack((np.cos(t), -np.sin(t))), atol=1e-9)


def test_dopri5_steps_backward():
    steps = list(dopri5_steps(np.array([math.e]), 1., 0., lambda y, t: y))
    t_last, y_last = steps[-1]
    assert t_last == 0.
    assert y_last[0] == pytest.approx(1., rel=1e-9)
    times = [s[0] for s in steps]
    assert all(a > b for a, b in zip(times, times[1:]))


def test_dopri5_max_steps():
    with pytest.raises(StepUnderflow):
        list(dopri5_steps(np.array([1., 0.]), 0., 100., oscillator, max_steps=5))


def test_counter():
    stream = io.StringIO()
    count = Counter('Text', 4, stream=stream)
    for i in range(-1, 4):
        count(i)
    text = stream.getvalue()
    assert text.startswith('\rText')
    assert text.endswith('100%\n')
    silent = Counter.from_verbose(False, 'Text', 4)
    silent(3)


def test_field_evaluations_are_logged(caplog):
    field = Evaluations(oscillator, 'oscillator')
    with caplog.at_level(logging.DEBUG, logger='hkl.misc.counter'):
        rk_4(np.array([1., 0.]), np.linspace(0., 1., 11), field, verbose=False)
        assert field.calls == 40
        assert field.report() == 40
        list(dopri5_steps(np.array([1., 0.]), 0., 1., oscillator))
    messages = [record.getMessage() for record in caplog.records]
    assert 'RK4: 40 evaluations, 10 steps' in messages
    assert 'oscillator: 40 evaluations' in messages
    assert any(m.startswith('DOPRI5: ') and 'rejected' in m for m in messages)


def test_tableau_consistency():
    assert_allclose(rk_4.tableau.c, [0., .5, .5, 1.])
    assert_allclose(DOPRI5.c[-1], 1.)
    assert DOPRI5.b.sum() == pytest.approx(1.)
    assert DOPRI5.error.sum() == pytest.approx(0., abs=1e-15)
    with pytest.raises(InvalidParameter):
        ButcherTableau(np.zeros((2, 3)), np.ones(2))
