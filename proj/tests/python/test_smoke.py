"""Smoke tests for the python bindings."""

import json

import numpy as np
import pytest

liek = pytest.importorskip("liek")


def test_geometry_surface():
    g = liek.make_geometry("circle", n=64)
    assert g.kind == "circle"
    assert g.n == 64
    assert len(g.nodes_x) == 64
    assert abs(g.spacing - 2 * np.pi / 64) < 1e-15

    b = liek.make_geometry("binterval", n=32, window=5.0)
    assert abs(b.unstraighten(0.0) - 0.5) < 1e-15
    assert abs(b.straighten(b.unstraighten(1.25)) - 1.25) < 1e-12

    with pytest.raises(Exception):
        liek.make_geometry("moebius")


def test_identity_apply_roundtrip():
    g = liek.make_geometry("circle", n=64)
    op = liek.assemble(g, "one")
    rng = np.random.default_rng(7)
    u = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    assert np.allclose(op.apply(u), u, atol=1e-10)
    assert op.order == 0.0


def test_frame_field_is_spectral_derivative():
    g = liek.make_geometry("circle", n=64)
    op = liek.assemble(g, "frame_field")
    theta = np.asarray(g.nodes_x)
    u = np.exp(3j * theta)
    # (-i d/ds) e^{i 3 s} = 3 e^{i 3 s}
    assert np.allclose(op.apply(u), 3 * u, atol=1e-10)


def test_algebra_and_recovery():
    g = liek.make_geometry("binterval", n=256)
    p = liek.assemble(g, "frame_field")
    pp = liek.compose(p, p)
    assert pp.order == 2.0

    # rungs up to the taper plateau edge (eta_max / 2 = 20 at n = 256)
    rec = liek.recover_symbol(p, x=g.unstraighten(0.4), xi=1.0,
                              ladder=[5.0, 10.0, 20.0])
    assert abs(rec["value"] - 1.0) < 1e-3
    assert len(rec["ladder"]) == len(rec["raw"])

    c = liek.commutator(p, liek.assemble(g, "poly:[1]"))
    assert np.abs(c.kernel()).max() < 1e-8

    a = liek.adjoint(p)
    assert a.kernel().shape == (256, 256)


def test_kernel_io_roundtrip(tmp_path):
    g = liek.make_geometry("circle", n=32)
    op = liek.assemble(g, "gauss")
    path = str(tmp_path / "k.bin")
    liek.write_kernel_binary(op, path)
    back = liek.read_kernel_binary(g, path)
    assert np.array_equal(back.kernel(), op.kernel())


def test_conjugation_requires_boundary():
    g = liek.make_geometry("circle", n=32)
    op = liek.assemble(g, "one")
    with pytest.raises(Exception):
        liek.conjugate_by_power(op, 1.0)

    b = liek.make_geometry("binterval", n=32)
    q = liek.assemble(b, "frame_field")
    r = liek.conjugate_by_power(liek.conjugate_by_power(q, 2.0), -2.0)
    assert np.allclose(r.kernel(), q.kernel(), atol=1e-8)


def test_default_config_round_trips():
    text = liek.default_config()
    assert "geometry" in text and "suite" in text


def test_run_suite_json(tmp_path):
    cfg = f"""
geometry {{ kind = circle  n = 64 }}
suite = [identity]
out = {tmp_path / "reports"}
seed = 3
"""
    out = json.loads(liek.run_suite_json(cfg))
    assert out["all_pass"] is True
    assert out["checks"][0]["name"] == "identity"
    assert out["checks"][0]["measured"] <= 1e-6

    as_json = json.dumps(
        {
            "geometry": {"kind": "circle", "n": 64},
            "suite": ["identity"],
            "out": str(tmp_path / "reports2"),
            "seed": 3,
        }
    )
    out2 = json.loads(liek.run_suite_json(as_json))
    assert out2["all_pass"] is True
