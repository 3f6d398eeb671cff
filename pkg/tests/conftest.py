import copy

import pytest

from qsr import registry


@pytest.fixture(autouse=True)
def _restore_builtin_flags():
    # builtins are cached module-wide; tests may tweak completeness flags
    snapshot = {name: copy.copy(registry.builtin(name).flags) for name in registry.BUILTIN_NAMES}
    yield
    for name, flags in snapshot.items():
        registry.builtin(name).flags.ra7_holds = flags.ra7_holds
        registry.builtin(name).flags.ra9_holds = flags.ra9_holds
        registry.builtin(name).flags.acl_decides_atomic = flags.acl_decides_atomic
