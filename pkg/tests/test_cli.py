import json
import subprocess
import sys

import numpy as np
import pytest

from oped.cli import main
from oped.geometry import build_geometry
from oped.io import read_image, read_pgm, read_sinogram, write_image
from oped.grid import ImageGrid


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_phantom_small(tmp_path, capsys):
    out = tmp_path / "p.img"
    run_json(capsys, "phantom", "--size", 16, "--out", out)
    raw = out.read_bytes()
    assert int.from_bytes(raw[12:16], "little") == 16
    assert read_image(out).values.shape == (16, 16)
    assert read_pgm(f"{out}.pgm").shape == (16, 16)
    assert (tmp_path / "p.img.pgm.json").exists()


def test_phantom_origin_value(tmp_path, capsys):
    out = tmp_path / "sl.img"
    run_json(capsys, "phantom", "--size", 512, "--out", out, "--no-pgm")
    v = read_image(out).values
    np.testing.assert_array_equal(v[254:258, 254:258], 1.02)
    assert not (tmp_path / "sl.img.pgm").exists()


def test_missing_out_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["phantom", "--size", "16"])
    assert exc.value.code == 2


def test_bad_phantom_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "phantom", "--size", 16, "--phantom", bad, "--out", tmp_path / "x.img")
    assert code == 2 and "invalid JSON" in err
    bad.write_text(json.dumps({"ellipses": [{"cx": 0.9, "cy": 0, "a": 0.5, "b": 0.5, "alpha": 0, "rho": 1}]}))
    code, _, _ = run(capsys, "phantom", "--size", 16, "--phantom", bad, "--out", tmp_path / "x.img")
    assert code == 2


def test_missing_phantom_file_is_io_error(tmp_path, capsys):
    code, _, _ = run(capsys, "phantom", "--size", 16, "--phantom", tmp_path / "none.json", "--out", tmp_path / "x.img")
    assert code == 3


def test_project_unit_disk_json(tmp_path, capsys):
    spec = tmp_path / "disk.json"
    spec.write_text(json.dumps({"ellipses": [{"cx": 0, "cy": 0, "a": 1, "b": 1, "alpha": 0, "rho": 1}]}))
    out = tmp_path / "d.sino"
    csv = tmp_path / "d.csv"
    rep = run_json(capsys, "project", "--m", 5, "--phantom", spec, "--out", out, "--csv", csv)
    s = read_sinogram(out)
    np.testing.assert_allclose(s.data, np.broadcast_to(2 * np.sin(s.geometry.psi), s.data.shape), atol=1e-13)
    assert rep["max_abs"] <= rep["bound"]
    assert csv.read_text().startswith("nu,j,phi,t,value\n")


@pytest.mark.parametrize("argv, shape", [(["--m", "512"], [1025, 1025]), (["--m", "4", "--variant", "2"], [9, 8])])
def test_project_dimensions(tmp_path, capsys, argv, shape):
    out = tmp_path / "s.sino"
    rep = run_json(capsys, "project", *argv, "--out", out)
    assert rep["shape"] == shape
    assert list(read_sinogram(out).data.shape) == shape


def test_reconstruct_writes_timing(tmp_path, capsys):
    sino = tmp_path / "s.sino"
    run_json(capsys, "project", "--m", 8, "--out", sino)
    for method in ("fast", "direct"):
        out = tmp_path / f"{method}.img"
        rep = run_json(capsys, "reconstruct", "--sino", sino, "--method", method, "--size", 32, "--out", out)
        timing = json.loads(out.with_name(f"{method}.img.timing.json").read_text())
        assert set(timing) >= {"seconds_total", "seconds_backprojection"}
        assert timing["seconds_total"] >= timing["seconds_backprojection"] >= 0
        assert rep["method"] == method
        assert read_image(out).M == 32


def test_reconstruct_rejects_roi(tmp_path, capsys):
    sino = tmp_path / "s.sino"
    run_json(capsys, "project", "--m", 4, "--out", sino)
    code, _, err = run(capsys, "reconstruct", "--sino", sino, "--method", "fast", "--size", 16, "--roi", 0.999, "--out", tmp_path / "r.img")
    assert code == 2 and "cos(pi/(2m+1))" in err
    code, _, _ = run(capsys, "reconstruct", "--sino", sino, "--size", 8, "--out", tmp_path / "r.img")
    assert code == 2


def test_reconstruct_corrupt_sinogram(tmp_path, capsys):
    sino = tmp_path / "s.sino"
    sino.write_bytes(b"OPEDSINO" + b"\0" * 4)
    code, _, _ = run(capsys, "reconstruct", "--sino", sino, "--size", 16, "--out", tmp_path / "r.img")
    assert code == 3


def test_compare(tmp_path, capsys, rng):
    a, b = tmp_path / "a.img", tmp_path / "b.img"
    write_image(ImageGrid(rng.standard_normal((16, 16)), roi=1.5), a)
    write_image(ImageGrid(rng.standard_normal((16, 16)), roi=1.5), b)
    rep = run_json(capsys, "compare", "--a", a, "--b", a)
    assert rep["rse"] == 0 and rep["me"] == 0
    run_json(capsys, "compare", "--a", a, "--b", b, "--diff", tmp_path / "ab.img")
    run_json(capsys, "compare", "--a", b, "--b", a, "--diff", tmp_path / "ba.img", "--no-pgm")
    ab, ba = read_image(tmp_path / "ab.img").values, read_image(tmp_path / "ba.img").values
    np.testing.assert_array_equal(ab, -ba)
    c = tmp_path / "c.img"
    write_image(ImageGrid(np.ones((8, 8)), roi=1.5), c)
    code, _, _ = run(capsys, "compare", "--a", a, "--b", c)
    assert code == 2


def test_bench(capsys):
    rep = run_json(capsys, "bench", "--m-list", "16,32,64,128", "--size", 64)
    assert [r["m"] for r in rep["rows"]] == [16, 32, 64, 128]
    assert all(r["speedup"] == pytest.approx(r["t_direct"] / r["t_fast"]) for r in rep["rows"])
    # direct costs O(N) per view and pixel, fast O(1) plus an O(N^2 log N) table
    slope = rep["loglog_slope"]
    assert slope["direct"] > slope["fast"] > 0


def test_bench_empty_m_list(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bench", "--m-list", "", "--size", "16"])
    assert exc.value.code == 2


def test_convergence_constant_direct(capsys):
    rep = run_json(capsys, "convergence", "--phantom", "unit-disk", "--m-list", "2,4,8", "--size", 32, "--method", "direct")
    assert all(r["max_abs"] < 1e-10 for r in rep["rows"])


def test_convergence_smooth(capsys):
    rep = run_json(capsys, "convergence", "--m-list", "8,16,32", "--size", 64)
    assert rep["non_increasing"]
    assert all(r["radius"] == 0.8 for r in rep["rows"])


def test_convergence_step_phantom_plateaus(capsys):
    # informational: no uniform convergence for a discontinuous target
    rep = run_json(capsys, "convergence", "--phantom", "shepp-logan", "--m-list", "16,32", "--size", 64)
    assert min(r["max_abs"] for r in rep["rows"]) > 0.05


def test_threads_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("OPED_THREADS", "oops")
    code, _, _ = run(capsys, "phantom", "--size", 16, "--out", tmp_path / "p.img")
    assert code == 2
    monkeypatch.setenv("OPED_THREADS", "1")
    assert run(capsys, "phantom", "--size", 16, "--out", tmp_path / "p.img")[0] == 0


def test_deterministic_outputs(tmp_path, capsys):
    sino = tmp_path / "s.sino"
    run_json(capsys, "project", "--m", 12, "--out", sino)
    for name in ("a", "b"):
        run_json(capsys, "reconstruct", "--sino", sino, "--size", 32, "--out", tmp_path / f"{name}.img", "--no-pgm")
    assert (tmp_path / "a.img").read_bytes() == (tmp_path / "b.img").read_bytes()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "oped", "phantom", "--size", "16", "--out", str(tmp_path / "p.img")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["size"] == 16
