import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from verlinde_kit import _kernels, _pykernels, build_root_datum
from verlinde_kit.affine import kernel_data
from verlinde_kit.verlinde import _weight_arrays

try:
    from verlinde_kit import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def test_backend_flag():
    assert _kernels.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert _kernels.BACKEND == "cython"


@settings(max_examples=100, deadline=None)
@given(name=st.sampled_from(["A1", "A2", "B2", "G2", "C3", "D4"]), kd=st.integers(0, 9), data=st.data())
def test_reduce_backends_agree(name, kd, data):
    if _ckernels is None:
        return
    d = build_root_datum(name)
    mu = [data.draw(st.integers(-30, 30)) for _ in range(d.rank)]
    a = _pykernels.reduce_weight(*kernel_data(d), kd, list(mu))
    b = _ckernels.reduce_weight(*kernel_data(d), kd, list(mu))
    assert [int(x) for x in a[0]] == [int(x) for x in b[0]] and a[1:] == b[1:]


@settings(max_examples=40, deadline=None)
@given(name=st.sampled_from(["A2", "B2", "G2"]), kd=st.integers(0, 8), data=st.data())
def test_accumulate_backends_agree(name, kd, data):
    if _ckernels is None:
        return
    d = build_root_datum(name)
    lam = tuple(data.draw(st.integers(0, 3)) for _ in range(d.rank))
    mu = tuple(data.draw(st.integers(0, 2)) for _ in range(d.rank))
    w, m = _weight_arrays(d, mu)
    shifted = [c + 1 for c in lam]
    a = _pykernels.klimyk_accumulate(*kernel_data(d), kd, shifted, w, m)
    b = _ckernels.klimyk_accumulate(*kernel_data(d), kd, shifted, np.ascontiguousarray(w), np.ascontiguousarray(m))
    assert {tuple(int(x) for x in k): v for k, v in a.items() if v} == {tuple(int(x) for x in k): v for k, v in b.items() if v}


def test_pure_python_fallback():
    import json
    import os
    import subprocess
    import sys

    code = (
        "import json, verlinde_kit as v;"
        "d = v.build_root_datum('A2');"
        "print(json.dumps([v.BACKEND, v.verify_fusion(d, 3)['ok'], v.fusion_table(d, 2).to_json()]))"
    )
    env = {**os.environ, "VERLINDE_KIT_PURE_PYTHON": "1"}
    out = json.loads(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout)
    assert out[0] == "python" and out[1]
    from verlinde_kit import fusion_table

    assert out[2] == json.loads(json.dumps(fusion_table(build_root_datum("A2"), 2).to_json()))
