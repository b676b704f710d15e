import json
import os

import numpy as np
import pytest

from rigkit.graphgen import BipartiteIncidence, generate
from rigkit.model import ModelParams, trial_rng
from rigkit.storage import (
    GraphFormatError,
    file_checksum,
    read_graph,
    write_graph,
)


@pytest.fixture()
def instance():
    params = ModelParams(n=120, m=900, alpha=0.8, c0=1.0)
    inc, w = generate(params, trial_rng(21, 120, 0))
    return params, inc, w


@pytest.mark.parametrize("fmt,ext", [("binary", "rig"), ("json", "json")])
def test_round_trip(tmp_path, instance, fmt, ext):
    params, inc, w = instance
    path = tmp_path / f"g.{ext}"
    write_graph(path, inc, params.alpha, params.c0, seed=21, fmt=fmt)
    inc2, header, w2 = read_graph(path)
    assert inc2 == inc
    assert header.n == 120 and header.m == 900
    assert header.alpha == params.alpha and header.c0 == params.c0
    assert header.seed == 21
    assert header.params() == params
    # weights come back as realized normalized weights
    assert np.array_equal(w2.sizes, inc.sizes())
    assert np.allclose(w2.tilde_z, inc.sizes() / params.size_scale)


def test_rewrite_is_byte_identical(tmp_path, instance):
    params, inc, w = instance
    p1, p2 = tmp_path / "a.rig", tmp_path / "b.rig"
    write_graph(p1, inc, params.alpha, params.c0, seed=21)
    write_graph(p2, inc, params.alpha, params.c0, seed=21)
    assert file_checksum(p1) == file_checksum(p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_format_sniffing(tmp_path, instance):
    params, inc, w = instance
    # extension does not matter; the magic does
    path = tmp_path / "oddly.named"
    write_graph(path, inc, params.alpha, params.c0, seed=1, fmt="binary")
    inc2, _, _ = read_graph(path)
    assert inc2 == inc
    path2 = tmp_path / "oddly2.named"
    write_graph(path2, inc, params.alpha, params.c0, seed=1, fmt="json")
    inc3, _, _ = read_graph(path2)
    assert inc3 == inc


def test_truncated_binary_rejected(tmp_path, instance):
    params, inc, w = instance
    path = tmp_path / "g.rig"
    write_graph(path, inc, params.alpha, params.c0, seed=1)
    blob = path.read_bytes()
    for cut in (3, 20, len(blob) - 5):
        bad = tmp_path / f"cut{cut}.rig"
        bad.write_bytes(blob[:cut])
        with pytest.raises(GraphFormatError):
            read_graph(bad)


def test_trailing_garbage_rejected(tmp_path, instance):
    params, inc, w = instance
    path = tmp_path / "g.rig"
    write_graph(path, inc, params.alpha, params.c0, seed=1)
    bad = tmp_path / "pad.rig"
    bad.write_bytes(path.read_bytes() + b"\x00" * 16)
    with pytest.raises(GraphFormatError):
        read_graph(bad)


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "bogus.rig"
    path.write_bytes(b"NOPE" + b"\x00" * 60)
    with pytest.raises(GraphFormatError):
        read_graph(path)


def test_corrupt_json_rejected(tmp_path, instance):
    params, inc, w = instance
    path = tmp_path / "g.json"
    write_graph(path, inc, params.alpha, params.c0, seed=1, fmt="json")
    doc = json.loads(path.read_text())
    doc["format"] = "something-else"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    with pytest.raises(GraphFormatError):
        read_graph(bad)
    bad.write_text("{not json")
    with pytest.raises(GraphFormatError):
        read_graph(bad)


def test_inconsistent_sets_rejected(tmp_path, instance):
    params, inc, w = instance
    path = tmp_path / "g.json"
    write_graph(path, inc, params.alpha, params.c0, seed=1, fmt="json")
    doc = json.loads(path.read_text())
    doc["sets"][0] = [0, 0]  # duplicate attribute
    bad = tmp_path / "dup.json"
    bad.write_text(json.dumps(doc))
    with pytest.raises(GraphFormatError):
        read_graph(bad)


def test_unknown_format_argument(tmp_path, instance):
    params, inc, w = instance
    with pytest.raises(ValueError):
        write_graph(tmp_path / "x", inc, params.alpha, params.c0, seed=1,
                    fmt="yaml")


def test_empty_sets_round_trip(tmp_path):
    inc = BipartiteIncidence.from_sets(3, 50, [[], [7], []])
    write_graph(tmp_path / "tiny.rig", inc, 0.5, 1.0, seed=0)
    inc2, header, w2 = read_graph(tmp_path / "tiny.rig")
    assert inc2 == inc
    assert w2.sizes.tolist() == [0, 1, 0]
