import pytest
from pydantic import ValidationError

from config_utils import (
    DEFAULT_RANDOM_CASES, DEFAULT_SEED, THREADS_ENV_VAR, RuntimeSettings, load_settings, override_settings,
)
from error_utils import ContextError
from expr_utils import AmbientContext, make_context


def test_defaults():
    settings = load_settings({})
    assert settings.seed == DEFAULT_SEED == 20240917
    assert settings.random_cases == DEFAULT_RANDOM_CASES == 1000
    assert 1 <= settings.threads <= 8


def test_threads_from_environment():
    assert load_settings({THREADS_ENV_VAR: "3"}).threads == 3
    assert load_settings({THREADS_ENV_VAR: "  "}).threads >= 1


@pytest.mark.parametrize("raw", ["0", "-2", "many"])
def test_invalid_threads(raw):
    with pytest.raises(ContextError):
        load_settings({THREADS_ENV_VAR: raw})


def test_settings_are_frozen():
    settings = RuntimeSettings()
    with pytest.raises(ValidationError):
        settings.seed = 1


def test_context_is_hashable_and_frozen():
    ctx = make_context(2, 3, 4)
    assert ctx == AmbientContext(d=2, k=3, n=4)
    assert len({ctx, make_context(2, 3, 4)}) == 1
    assert ctx.with_n(5).n == 5
    assert ctx.with_k(4).k == 4
    with pytest.raises(ValidationError):
        ctx.d = 3


def test_context_bounds():
    with pytest.raises(ContextError):
        make_context(2, 3, -1)


def test_override_settings():
    base = RuntimeSettings(threads=2)
    updated = override_settings(base, seed=7, threads=None, random_cases=5)
    assert (updated.threads, updated.seed, updated.random_cases) == (2, 7, 5)
    assert base.seed == DEFAULT_SEED


@pytest.mark.parametrize("overrides", [{"random_cases": -1}, {"threads": 0}])
def test_override_settings_rejects_invalid_values(overrides):
    with pytest.raises(ContextError):
        override_settings(RuntimeSettings(), **overrides)
