import dataclasses
import functools
import os

import pytest
from hypothesis import settings

from adiabatic_passage.scenario import PRESET_NAMES, preset, run_scenario

settings.register_profile("default", max_examples=25, deadline=None)
settings.register_profile("ci", max_examples=10, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@functools.lru_cache(maxsize=None)
def preset_run(name: str, scale: float = 1.0):
    """Cached scenario run of a preset, optionally with both envelopes scaled."""
    config = preset(name, outputs=())
    if scale != 1.0:
        config = dataclasses.replace(config, profile=config.profile.scaled(scale, scale))
    return run_scenario(config)


@pytest.fixture(params=PRESET_NAMES)
def preset_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(module.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
