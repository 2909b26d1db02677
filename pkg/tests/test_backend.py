import os
import subprocess
import sys

import pytest

from huffre import _backend
from huffre._parallel import parallel_map, resolve_workers, split_ranges


def _probe(env_extra):
    env = dict(os.environ, **env_extra)
    code = "import huffre; print(huffre.BACKEND)"
    return subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                          check=True).stdout.strip()


def test_pure_python_switch():
    assert _probe({"HUFFRE_PURE_PYTHON": "1"}) == "python"


@pytest.mark.skipif("native" not in _backend.AVAILABLE, reason="compiled kernels not built")
def test_native_is_default_when_built():
    env = {k: v for k, v in os.environ.items() if k != "HUFFRE_PURE_PYTHON"}
    out = subprocess.run([sys.executable, "-c", "import huffre; print(huffre.BACKEND)"], env=env,
                         capture_output=True, text=True, check=True).stdout.strip()
    assert out == "native"


def test_fallback_when_extension_missing():
    code = ("import sys; sys.modules['huffre._ckernels'] = None\n"
            "import huffre, numpy as np\n"
            "from huffre.pipeline import compress\n"
            "from huffre.encoder import decode_archive\n"
            "d = np.arange(5000, dtype=np.uint16) % 7\n"
            "assert (decode_archive(compress(d, 7).archive) == d).all()\n"
            "print(huffre.BACKEND, sorted(huffre._backend.AVAILABLE))")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python ['python']"


@pytest.mark.parametrize("n,parts", [(0, 3), (10, 1), (10, 3), (3, 8), (100, 7)])
def test_split_ranges_cover(n, parts):
    ranges = split_ranges(n, parts)
    assert ranges[0][0] == 0 and ranges[-1][1] == n
    assert all(a[1] == b[0] for a, b in zip(ranges, ranges[1:]))


def test_parallel_map_keeps_order():
    assert parallel_map(lambda x: x * x, range(20), 4) == [x * x for x in range(20)]


def test_resolve_workers(monkeypatch):
    monkeypatch.setenv("HUFFRE_WORKERS", "5")
    assert resolve_workers(None) == 5
    assert resolve_workers(2) == 2
    with pytest.raises(ValueError):
        resolve_workers(0)
