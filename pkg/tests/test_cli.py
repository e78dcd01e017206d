import json

import numpy as np
import pytest

from zonokit import cli
from zonokit.congruence import CongruenceWitness
from zonokit.zonotope import Zonotope

import oracles
from fixture_matrices import hex_facet_generators

A0 = hex_facet_generators()


def write_text_matrix(path, m):
    path.write_text("\n".join(" ".join(str(x) for x in row) for row in np.asarray(m)) + "\n")


def write_json_matrix(path, m):
    m = np.asarray(m, dtype=float)
    path.write_text(
        json.dumps(
            {"rows": m.shape[0], "cols": m.shape[1], "data": [float(x) for x in m.ravel()]}
        )
    )


@pytest.fixture
def a0_file(tmp_path):
    p = tmp_path / "a0.txt"
    write_text_matrix(p, A0)
    return str(p)


class TestMatrixParsing:
    def test_text_and_json_agree(self, tmp_path):
        p1 = tmp_path / "m.txt"
        p2 = tmp_path / "m.json"
        write_text_matrix(p1, A0)
        write_json_matrix(p2, A0)
        assert np.array_equal(cli.load_matrix(str(p1)), cli.load_matrix(str(p2)))

    def test_nan_rejected_with_position(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("1 2\n3 nan\n")
        with pytest.raises(cli.ParseFailure, match="2:2"):
            cli.load_matrix(str(p))

    def test_ragged_rejected(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("1 2\n3\n")
        with pytest.raises(cli.ParseFailure, match="expected 2 entries"):
            cli.load_matrix(str(p))

    def test_json_length_mismatch(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"rows": 2, "cols": 2, "data": [1, 2, 3]}')
        with pytest.raises(cli.ParseFailure):
            cli.load_matrix(str(p))

    def test_missing_file(self):
        with pytest.raises(cli.ParseFailure):
            cli.load_matrix("/nonexistent/m.txt")


class TestVolumeCommand:
    def test_fixture_line(self, a0_file, capsys):
        assert cli.main(["volume", a0_file]) == 0
        out = capsys.readouterr().out
        assert "rank 3, volume 10, 9/10 subsets independent" in out

    def test_identity(self, tmp_path, capsys):
        p = tmp_path / "i.txt"
        write_text_matrix(p, np.eye(3))
        assert cli.main(["volume", str(p)]) == 0
        assert "volume 1," in capsys.readouterr().out

    def test_planar(self, tmp_path, capsys):
        p = tmp_path / "m.txt"
        write_text_matrix(p, [[1, 0, 1], [0, 1, 1]])
        assert cli.main(["volume", str(p)]) == 0
        assert "volume 3," in capsys.readouterr().out

    def test_monte_carlo_within_one_percent(self, a0_file, capsys):
        assert cli.main(["volume", a0_file, "--mc-samples", "400000", "--seed", "3"]) == 0
        out = capsys.readouterr().out
        mc = float(next(l for l in out.splitlines() if l.startswith("mc-volume")).split()[1])
        assert abs(mc - 10.0) <= 0.1

    def test_rank_deficient_warns(self, tmp_path, capsys):
        p = tmp_path / "m.txt"
        write_text_matrix(p, A0[:, [0, 1, 2]])
        assert cli.main(["volume", str(p)]) == 0
        err = capsys.readouterr().err
        assert "rank 2" in err


class TestCongruentCommand:
    def test_positive_with_witness_file(self, tmp_path, capsys):
        rng = np.random.default_rng(90)
        a = rng.normal(size=(3, 5))
        sigma, signs = oracles.random_signed_permutation(rng, 5)
        b = oracles.random_orthogonal(rng, 3) @ (a[:, sigma] * signs)
        pa, pb = tmp_path / "a.txt", tmp_path / "b.txt"
        write_text_matrix(pa, a)
        write_text_matrix(pb, b)
        out_file = tmp_path / "w.json"
        code = cli.main(["congruent", str(pa), str(pb), "--out", str(out_file)])
        assert code == 0
        payload = json.loads(out_file.read_text())
        assert payload["format_version"] == 1
        w = CongruenceWitness(
            tuple(payload["sigma"]),
            tuple(payload["signs"]),
            np.asarray(payload["q"]["data"]).reshape(
                payload["q"]["rows"], payload["q"]["cols"]
            ),
        )
        assert w.residual(a, b) <= 1e-8 * max(1.0, np.linalg.norm(b))

    def test_negative_scaled_copy(self, tmp_path):
        from fixture_matrices import gram_equal_pairs

        a3 = gram_equal_pairs()[2][0]
        pa, pb = tmp_path / "a.txt", tmp_path / "b.txt"
        write_text_matrix(pa, a3)
        write_text_matrix(pb, 2 * a3)
        assert cli.main(["congruent", str(pa), str(pb)]) == 1

    def test_capacity(self, tmp_path):
        rng = np.random.default_rng(91)
        a = rng.normal(size=(2, 11))
        pa = tmp_path / "a.txt"
        write_text_matrix(pa, a)
        assert cli.main(["congruent", str(pa), str(pa)]) == 2


class TestTileCommand:
    def test_fixture(self, a0_file, tmp_path, capsys):
        out = tmp_path / "t.json"
        assert cli.main(["tile", a0_file, "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert len(payload["tiles"]) == 9
        assert payload["validation"]["ok"]
        assert "9 tiles" in capsys.readouterr().out

    def test_identity_single_tile(self, tmp_path):
        p = tmp_path / "i.txt"
        write_text_matrix(p, np.eye(3))
        out = tmp_path / "t.json"
        assert cli.main(["tile", str(p), "--out", str(out)]) == 0
        assert len(json.loads(out.read_text())["tiles"]) == 1

    def test_perturbed_ten(self, tmp_path):
        p = tmp_path / "m.txt"
        a = hex_facet_generators()
        a[2, 2] = 0.1
        write_text_matrix(p, a)
        out = tmp_path / "t.json"
        assert cli.main(["tile", str(p), "--out", str(out)]) == 0
        assert len(json.loads(out.read_text())["tiles"]) == 10

    def test_rank_deficient_exit3(self, tmp_path):
        p = tmp_path / "m.txt"
        write_text_matrix(p, A0[:, [0, 1, 2]])
        assert cli.main(["tile", str(p)]) == 3

    def test_explicit_order(self, a0_file, tmp_path):
        out = tmp_path / "t.json"
        assert cli.main(["tile", a0_file, "--order", "4,3,2,1,0", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["order"] == [4, 3, 2, 1, 0]
        assert len(payload["tiles"]) == 9


class TestRootCommand:
    def test_identity(self, tmp_path, capsys):
        p = tmp_path / "i.txt"
        write_text_matrix(p, np.eye(3))
        out = tmp_path / "r.json"
        assert cli.main(["root", str(p), "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        root = np.asarray(payload["data"]).reshape(3, 3)
        assert np.allclose(root, np.eye(3))
        assert "residual 0" in capsys.readouterr().out

    def test_roundtrip_fixture(self, tmp_path):
        from zonokit.numkit import compound

        rng = np.random.default_rng(92)
        a = rng.normal(size=(4, 4)) + np.eye(4)
        p = tmp_path / "b.txt"
        write_text_matrix(p, compound(a))
        out = tmp_path / "r.json"
        assert cli.main(["root", str(p), "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        root = np.asarray(payload["data"]).reshape(4, 4)
        assert np.allclose(root, a, atol=1e-7)

    def test_no_real_root_exit4(self, tmp_path, capsys):
        p = tmp_path / "b.txt"
        write_text_matrix(p, np.diag([1.0, 1.0, -1.0]))
        assert cli.main(["root", str(p)]) == 4
        assert "no real root" in capsys.readouterr().err

    def test_singular_exit4(self, tmp_path, capsys):
        p = tmp_path / "b.txt"
        write_text_matrix(p, np.ones((3, 3)))
        assert cli.main(["root", str(p)]) == 4
        assert "precondition" in capsys.readouterr().err


class TestMeshCommand:
    def test_cube(self, tmp_path):
        p = tmp_path / "i.txt"
        write_text_matrix(p, np.eye(3))
        out = tmp_path / "m.off"
        assert cli.main(["mesh", str(p), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "OFF"
        v, f, e = (int(x) for x in lines[1].split())
        assert (v, f, e) == (8, 6, 0)

    def test_fixture_counts_match_hull_oracle(self, a0_file, tmp_path):
        out = tmp_path / "m.off"
        assert cli.main(["mesh", a0_file, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        v, f, _ = (int(x) for x in lines[1].split())
        masks = (np.arange(32)[:, None] >> np.arange(5)) & 1
        cloud = masks.astype(float) @ A0.T
        assert v == len(oracles.hull_vertex_set(cloud)) == 20
        assert f == len(oracles.support_facets(A0)) == 16
        sizes = sorted(int(l.split()[0]) for l in lines[2 + v :])
        assert sizes.count(6) == 2  # the two hexagon faces
        assert sizes.count(4) == 14

    def test_hexagonal_prism(self, tmp_path):
        p = tmp_path / "m.txt"
        write_text_matrix(p, A0[:, :4])
        out = tmp_path / "m.off"
        assert cli.main(["mesh", str(p), "--out", str(out)]) == 0
        v, f, _ = (int(x) for x in out.read_text().splitlines()[1].split())
        assert (v, f) == (12, 8)

    def test_reparse_vertices_and_orientation(self, a0_file, tmp_path):
        out = tmp_path / "m.off"
        assert cli.main(["mesh", a0_file, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        v, f, _ = (int(x) for x in lines[1].split())
        verts = np.asarray([[float(x) for x in l.split()] for l in lines[2 : 2 + v]])
        got = {tuple(np.round(p, 9)) for p in verts}
        want = {tuple(np.round(p, 9)) for p in Zonotope(A0).vertices()}
        assert got == want
        # re-hulling the emitted vertices loses nothing: all are extreme
        assert oracles.hull_vertex_set(verts) == got
        center = Zonotope(A0).center()
        for line in lines[2 + v :]:
            idx = [int(x) for x in line.split()[1:]]
            poly = verts[idx]
            centroid = poly.mean(axis=0)
            outward = centroid - center
            # ccw orientation about the outward normal (right-hand rule)
            normal = np.zeros(3)
            for i in range(len(poly)):
                normal += np.cross(poly[i], poly[(i + 1) % len(poly)])
            assert float(normal @ outward) > 0

    def test_wrong_rank_exit5(self, tmp_path):
        p = tmp_path / "m.txt"
        write_text_matrix(p, np.eye(2))
        assert cli.main(["mesh", str(p)]) == 5

    def test_too_many_generators_exit2(self, tmp_path):
        rng = np.random.default_rng(93)
        p = tmp_path / "m.txt"
        write_text_matrix(p, rng.normal(size=(3, 17)))
        assert cli.main(["mesh", str(p)]) == 2

    def test_determinism(self, a0_file, tmp_path):
        out1, out2 = tmp_path / "m1.off", tmp_path / "m2.off"
        cli.main(["mesh", a0_file, "--out", str(out1)])
        cli.main(["mesh", a0_file, "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()


class TestSymmetryCommand:
    def test_square(self, tmp_path, capsys):
        p = tmp_path / "sq.txt"
        p.write_text("0 0\n1 0\n1 1\n0 1\n")
        assert cli.main(["symmetry", str(p)]) == 0
        out = capsys.readouterr().out
        assert "symmetric, center 0.5 0.5" in out
        assert "zonogon generators" in out

    def test_pentagon(self, tmp_path, capsys):
        import math

        p = tmp_path / "p.txt"
        pts = [
            (math.cos(2 * math.pi * i / 5), math.sin(2 * math.pi * i / 5))
            for i in range(5)
        ]
        p.write_text("\n".join(f"{x} {y}" for x, y in pts) + "\n")
        assert cli.main(["symmetry", str(p)]) == 1
        out = capsys.readouterr().out
        assert "not symmetric" in out
        assert "zonogon: absent" in out

    def test_hexagon_generators_recovered(self, tmp_path, capsys):
        import math

        z = Zonotope(np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]]))
        verts = z.vertices()
        c = np.mean(verts, axis=0)
        verts.sort(key=lambda q: math.atan2(q[1] - c[1], q[0] - c[0]))
        p = tmp_path / "h.txt"
        p.write_text("\n".join(" ".join(str(x) for x in q) for q in verts) + "\n")
        assert cli.main(["symmetry", str(p)]) == 0
        assert "zonogon generators" in capsys.readouterr().out

    def test_segment_json(self, tmp_path, capsys):
        p = tmp_path / "loop.json"
        p.write_text(
            json.dumps(
                {
                    "segments": [
                        [[0, 0], [1, 0]],
                        [[1, 0], [1, 1]],
                        [[1, 1], [0, 1]],
                        [[0, 1], [0, 0]],
                    ]
                }
            )
        )
        assert cli.main(["symmetry", str(p)]) == 0
        assert "loop: symmetric" in capsys.readouterr().out


class TestExitCodesAndConfig:
    def test_parse_error_exit10(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("1 nan\n")
        assert cli.main(["volume", str(p)]) == 10

    def test_env_tol_override(self, a0_file, monkeypatch):
        monkeypatch.setenv("ZONOKIT_TOL_ABS", "0.5")
        parser = cli.build_parser()
        args = parser.parse_args(["volume", a0_file])
        assert args.tol_abs == 0.5

    def test_output_determinism(self, a0_file, capsys):
        cli.main(["volume", a0_file])
        first = capsys.readouterr().out
        cli.main(["volume", a0_file])
        second = capsys.readouterr().out
        assert first == second
