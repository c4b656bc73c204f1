import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cftpoly import _pykernels as pure
from cftpoly import kernels
from cftpoly.polycore import sigma_table

compiled = pytest.importorskip("cftpoly._ckernels")

ints = st.integers(min_value=-(10**30), max_value=10**30)
int_lists = st.lists(ints, max_size=12)


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


@given(int_lists, int_lists)
def test_convolve_matches(a, b):
    assert compiled.int_convolve(a, b) == pure.int_convolve(a, b)


@pytest.mark.parametrize("n_max", [0, 1, 5, 25])
def test_eta_numerators_match(n_max):
    s = sigma_table(n_max)
    assert compiled.eta_numerators(n_max, s) == pure.eta_numerators(n_max, s)


@given(st.integers(min_value=-5, max_value=12), st.integers(min_value=0, max_value=60))
def test_int_values_match(x, n):
    s = sigma_table(n)
    assert compiled.int_values(x, n, s) == pure.int_values(x, n, s)


@given(st.integers(-30, 30), st.integers(1, 30), st.integers(0, 40))
def test_scaled_values_match(p, q, n):
    s = sigma_table(n)
    assert compiled.scaled_values(p, q, n, s) == pure.scaled_values(p, q, n, s)


@given(st.lists(int_lists.filter(bool), max_size=6), st.integers(-100, 100), st.integers(1, 100))
def test_sign_kernels_match(seq, p, q):
    for a in seq:
        assert compiled.sign_at(a, p, q) == pure.sign_at(a, p, q)
    assert compiled.sign_variations(seq, p, q) == pure.sign_variations(seq, p, q)


def test_int_values_rejects_nonintegral():
    # not a divisor-sum table: at n=2 the sum is 5, odd
    bogus = [0, 2, 1]
    for impl in (pure, compiled):
        with pytest.raises(ArithmeticError):
            impl.int_values(1, 2, bogus)


def test_pure_env_selects_fallback():
    env = dict(os.environ, CFTPOLY_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from cftpoly import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_pure_backend_reproduces_table():
    code = "from cftpoly.verify import reproduce; print(reproduce('T4').passed, reproduce('T6').passed)"
    env = dict(os.environ, CFTPOLY_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["True", "True"]
