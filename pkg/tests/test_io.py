import json

import numpy as np
import pytest

from dynsamp import Kernel, Signal, collect, explicit, sublattice
from dynsamp import io as dio


def test_kernel_round_trip(tmp_path):
    k = Kernel.from_taps({-2: 0.1 + 1e-17j, 0: 1 / 3, 3: -0.7j})
    p = tmp_path / "k.csv"
    dio.write_kernel(p, k, comment="hello")
    back = dio.read_kernel(p)
    assert back.start == k.start and np.array_equal(back.values, k.values)
    assert p.read_text().startswith("# hello\n")


@pytest.mark.parametrize(
    "text",
    ["offset,re\n0,1\n", "offset,re,im\n0,x,0\n", "offset,re,im\n0,1,0\n0,2,0\n", "offset,re,im\n", "offset,re,im\n0,0,0\n"],
)
def test_kernel_malformed(tmp_path, text):
    p = tmp_path / "k.csv"
    p.write_text(text)
    with pytest.raises(dio.FormatError):
        dio.read_kernel(p)


def test_signal_round_trip(tmp_path):
    f = Signal(-4, np.random.default_rng(0).standard_normal(9) * (1 + 1j))
    p = tmp_path / "f.csv"
    dio.write_signal(p, f)
    g = dio.read_signal(p)
    assert g.start == -4 and np.array_equal(g.values, f.values)


def test_kernel_hash_ignores_comments():
    k = Kernel.from_taps({0: 0.5, 1: 0.5})
    assert dio.kernel_hash(k) == dio.kernel_hash(Kernel.from_taps({1: 0.5, 0: 0.5}))
    assert len(dio.kernel_hash(k)) == 64


@pytest.mark.parametrize("pat", [sublattice(3, 2), explicit([-3, 0, 7]), explicit([1, 2], (-10, 10))])
def test_pattern_round_trip(tmp_path, pat):
    p = tmp_path / "p.txt"
    dio.write_pattern(p, pat)
    assert dio.read_pattern(p) == pat


def test_pattern_malformed(tmp_path):
    p = tmp_path / "p.txt"
    for text in ["", "periodic,2\n", "periodic,2,3\n", "explicit\n1\n1\n", "grid,1,1\n"]:
        p.write_text(text)
        with pytest.raises(dio.FormatError):
            dio.read_pattern(p)


def test_samples_round_trip(tmp_path):
    k = Kernel.from_taps({0: 0.5, 1: 0.5j})
    smp = collect(k, Signal(0, [1.0, -2.0, 3.0]), sublattice(2, 1), 3, (0, 4))
    p = tmp_path / "s.csv"
    dio.write_samples(p, smp, "prov")
    vals, pts = dio.read_samples(p)
    assert np.array_equal(vals, smp.values) and np.array_equal(pts, smp.points)


def test_samples_incomplete_grid(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("s,lambda,re,im\n0,0,1,0\n1,2,1,0\n")
    with pytest.raises(dio.FormatError):
        dio.read_samples(p)


def test_json_floats_round_trip(tmp_path):
    p = tmp_path / "x.json"
    x = 0.1 + 0.2
    dio.dump_json(p, {"b": x, "a": [1, float("inf")], "c": {"z": None, "y": True}})
    text = p.read_text()
    d = json.loads(text)
    assert d["b"] == x and d["a"] == [1, "inf"] and list(d) == ["a", "b", "c"]
    assert "0.30000000000000004" in text


def test_fmt_seventeen_digits():
    assert dio.fmt(1 / 3) == "0.33333333333333331"
    assert float(dio.fmt(np.pi)) == np.pi
